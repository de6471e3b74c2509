#pragma once

#include <string>
#include <variant>
#include <vector>

#include "zonobasis/cylindric.hpp"
#include "zonobasis/types.hpp"
#include "zonobasis/zonotope.hpp"

namespace zonobasis {

/// Cell-centred tensor grid over [lo, hi]. Storage is row-major: the last
/// axis (the fiber coordinate y) is contiguous.
struct GridSpec {
  Vector lo;
  Vector hi;
  std::vector<int> n;

  int dim() const { return static_cast<int>(n.size()); }
  double step(int axis) const { return (hi(axis) - lo(axis)) / n[static_cast<std::size_t>(axis)]; }
  long size() const;
  /// number of columns (cells over the first dim-1 axes)
  long columns() const;
  double cell_volume() const;
  Vector center(long index) const;
  /// first dim-1 coordinates of a column's cell centres
  Vector column_point(long column) const;

  /// cube grid over the bounding box of z, n cells per axis
  static GridSpec bounding(const Zonotope& z, int n);
  bool operator==(const GridSpec& o) const;
};

using Support = std::variant<std::monostate, Zonotope, CylindricSet>;

struct GridFunction {
  GridSpec grid;
  std::vector<Complex> values;
  Support support;

  GridFunction() = default;
  GridFunction(GridSpec spec, Support supp = {});

  Complex& operator[](long i) { return values[static_cast<std::size_t>(i)]; }
  const Complex& operator[](long i) const { return values[static_cast<std::size_t>(i)]; }
  double max_abs() const;
};

/// Cells whose centre lies outside `support` (tolerance `tol`) but whose
/// value exceeds `zero` in modulus. `first` receives the first such cell.
long support_violations(const GridFunction& f, const Support& support,
                        double zero = 1e-12, long* first = nullptr,
                        double tol = 1e-9);

/// JSON ("*.json") or packed binary (anything else) persistence.
void write_grid_function(const GridFunction& f, const std::string& path);
GridFunction read_grid_function(const std::string& path);

} // namespace zonobasis
