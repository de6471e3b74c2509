#pragma once

#include "zonobasis/zonotope.hpp"

namespace zonobasis {

/// Set {(x, y) : x in base, floor(x) - 1/2 <= y <= floor(x) + 1/2}, with
/// floor(x) the lower fiber endpoint of `source` over x.
class CylindricSet {
public:
  CylindricSet(Zonotope source, Zonotope base, GeometryTolerances tol = {});

  int dim() const { return source_.dim(); }
  const Zonotope& base() const { return base_; }
  const Zonotope& source() const { return source_; }

  /// Throws InfeasibleFiber outside the base.
  double floor(const Vector& x) const;
  bool try_floor(const Vector& x, double& out) const;
  Fiber fiber(const Vector& x) const;
  bool contains(const Vector& p) const;
  double volume() const;

private:
  Zonotope source_;
  Zonotope base_;
  GeometryTolerances tol_;
};

/// Cylinder of height one hanging off the lower boundary of `previous`.
CylindricSet build_cylindric(const Zonotope& previous,
                             const GeometryTolerances& tol = {});

} // namespace zonobasis
