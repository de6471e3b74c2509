#pragma once

#include <vector>

#include "zonobasis/grid.hpp"

namespace zonobasis {

struct DecompositionOptions {
  /// additional k-terms beyond ceil(max fiber length); they must be zeros
  int extra_terms = 0;
  double support_zero = 1e-12;
  GeometryTolerances tol;
  int threads = 1;
};

struct Decomposition {
  GridFunction g; // supported on the cylinder
  GridFunction h; // supported on the peeled zonotope
  /// max (b - a) over the base columns and the number of k-terms used
  double max_fiber_length = 0.0;
  int terms = 0;
  long g_violations = 0;
  long h_violations = 0;
};

/// Splits f on omega (whose last generator must be e_d and whose other
/// generators must span) into g on the height-one cylinder over the lower
/// boundary of the peeled zonotope and h on the peeled zonotope, with
///   f(x, y) = g(x, y) + (h(x, y + 1/2) - h(x, y - 1/2)) / 2i.
/// Cells with y equal to the cylinder floor use the "below" rule.
Decomposition decompose(const GridFunction& f, const Zonotope& omega,
                        const DecompositionOptions& options = {});

/// g + (h(., . + 1/2) - h(., . - 1/2)) / 2i
GridFunction recompose(const GridFunction& g, const GridFunction& h);

struct FrequencySideResult {
  double max_residual = 0.0;         // max |F - G - H sin(pi y)|
  double max_integer_residual = 0.0; // max |F - G| over samples with integer y
  int integer_samples = 0;
};

/// Riemann-sum transform of a grid function at xi.
Complex grid_transform(const GridFunction& f, const Vector& xi);

FrequencySideResult freq_side_check(const GridFunction& f, const GridFunction& g,
                                    const GridFunction& h,
                                    const std::vector<Vector>& samples);
FrequencySideResult freq_side_check(const GridFunction& g, const GridFunction& h,
                                    const std::vector<Vector>& samples);

/// Number of grid cells per half unit along y, or throws GridMisaligned.
long half_shift(const GridSpec& grid);

} // namespace zonobasis
