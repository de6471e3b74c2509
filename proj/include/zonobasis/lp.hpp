#pragma once

#include "zonobasis/types.hpp"

namespace zonobasis {

/// Dense LP in bounded-variable standard form:
///   minimize cost'x  subject to  A x = b,  lower <= x <= upper.
/// All bounds must be finite; the problem is then never unbounded.
struct LpProblem {
  Matrix A;
  Vector b;
  Vector lower;
  Vector upper;
  Vector cost;
};

enum class LpStatus { Optimal, Infeasible };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  Vector x;
  double objective = 0.0;
  /// max |A x - b| at the returned point (phase-one point when infeasible)
  double residual = 0.0;
  int iterations = 0;
};

struct LpOptions {
  /// absolute tolerance on equality residuals for declaring feasibility
  double feasibility_tol = 1e-9;
  double optimality_tol = 1e-11;
  double pivot_tol = 1e-12;
  int max_iterations = 10000;
};

/// Two-phase revised simplex over bounded variables. Pivoting follows
/// Bland's rule (smallest eligible index enters, smallest index leaves on
/// ties) so the pivot sequence is fully deterministic.
LpResult solve_lp(const LpProblem& problem, const LpOptions& options = {});

} // namespace zonobasis
