#include "zonobasis/lp.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace zonobasis {

const char* to_string(ErrorKind kind) {
  switch (kind) {
  case ErrorKind::InvalidInput: return "invalid-input";
  case ErrorKind::DimensionMismatch: return "dimension-mismatch";
  case ErrorKind::InfeasibleFiber: return "infeasible-fiber";
  case ErrorKind::RankDeficient: return "rank-deficient";
  case ErrorKind::Singular: return "singular";
  case ErrorKind::GridMismatch: return "grid-mismatch";
  case ErrorKind::GridMisaligned: return "grid-misaligned";
  case ErrorKind::SupportViolation: return "support-violation";
  case ErrorKind::EtaGaveUp: return "eta-gave-up";
  case ErrorKind::SolverBreakdown: return "solver-breakdown";
  case ErrorKind::EmptyWindow: return "empty-window";
  }
  return "unknown";
}

namespace {

enum class VarState { Basic, AtLower, AtUpper };

constexpr double kInf = std::numeric_limits<double>::infinity();

// Working tableau shared by both phases. Columns [0, n) are the structural
// variables, [n, n + m) the phase-one artificials.
struct Simplex {
  const Matrix& A;
  const Vector& b;
  Vector lower, upper, cost;
  std::vector<VarState> state;
  std::vector<int> basis;
  Vector x;
  int n, m;
  const LpOptions& opt;
  int iterations = 0;

  Simplex(const Matrix& A_, const Vector& b_, const LpOptions& o)
      : A(A_), b(b_), n(static_cast<int>(A_.cols())),
        m(static_cast<int>(A_.rows())), opt(o) {}

  double column_entry(int row, int j) const {
    if (j < n) return A(row, j);
    return row == j - n ? artificial_sign[j - n] : 0.0;
  }

  Vector column(int j) const {
    Vector c(m);
    for (int i = 0; i < m; ++i) c(i) = column_entry(i, j);
    return c;
  }

  std::vector<double> artificial_sign;

  Matrix basis_matrix() const {
    Matrix B(m, m);
    for (int k = 0; k < m; ++k) B.col(k) = column(basis[k]);
    return B;
  }

  void update_basic_values(const Eigen::PartialPivLU<Matrix>& lu) {
    Vector rhs = b;
    const int total = n + m;
    for (int j = 0; j < total; ++j) {
      if (state[j] == VarState::Basic || x(j) == 0.0) continue;
      rhs -= column(j) * x(j);
    }
    Vector xb = lu.solve(rhs);
    for (int k = 0; k < m; ++k) x(basis[k]) = xb(k);
  }

  // Runs simplex iterations on the current cost until optimal.
  void run() {
    const int total = n + m;
    while (true) {
      if (++iterations > opt.max_iterations)
        throw Error(ErrorKind::SolverBreakdown,
                    "simplex exceeded iteration limit");
      Eigen::PartialPivLU<Matrix> lu;
      if (m > 0) {
        lu.compute(basis_matrix());
        update_basic_values(lu);
      }
      Vector cb(m);
      for (int k = 0; k < m; ++k) cb(k) = cost(basis[k]);
      Vector y = m > 0 ? Vector(lu.transpose().solve(cb)) : Vector(0);

      int entering = -1;
      double direction = 0.0;
      for (int j = 0; j < total; ++j) {
        if (state[j] == VarState::Basic || lower(j) == upper(j)) continue;
        double reduced = cost(j);
        for (int i = 0; i < m; ++i) reduced -= y(i) * column_entry(i, j);
        if (state[j] == VarState::AtLower && reduced < -opt.optimality_tol) {
          entering = j;
          direction = 1.0;
          break;
        }
        if (state[j] == VarState::AtUpper && reduced > opt.optimality_tol) {
          entering = j;
          direction = -1.0;
          break;
        }
      }
      if (entering < 0) return;

      Vector w = m > 0 ? Vector(lu.solve(column(entering))) : Vector(0);
      double step = upper(entering) - lower(entering);
      int leave_slot = -1;
      bool leave_to_upper = false;
      for (int k = 0; k < m; ++k) {
        const double delta = -direction * w(k);
        const int var = basis[k];
        double limit = kInf;
        bool to_upper = false;
        if (delta < -opt.pivot_tol) {
          limit = std::max(0.0, (x(var) - lower(var)) / (-delta));
        } else if (delta > opt.pivot_tol && std::isfinite(upper(var))) {
          limit = std::max(0.0, (upper(var) - x(var)) / delta);
          to_upper = true;
        } else {
          continue;
        }
        if (limit < step ||
            (limit == step && leave_slot >= 0 && var < basis[leave_slot])) {
          step = limit;
          leave_slot = k;
          leave_to_upper = to_upper;
        }
      }
      if (!std::isfinite(step))
        throw Error(ErrorKind::SolverBreakdown, "simplex ray is unbounded");

      if (leave_slot < 0) {
        // bound flip of the entering variable
        state[entering] = direction > 0 ? VarState::AtUpper : VarState::AtLower;
        x(entering) = direction > 0 ? upper(entering) : lower(entering);
        continue;
      }
      const int leaving = basis[leave_slot];
      state[leaving] = leave_to_upper ? VarState::AtUpper : VarState::AtLower;
      x(leaving) = leave_to_upper ? upper(leaving) : lower(leaving);
      x(entering) += direction * step;
      state[entering] = VarState::Basic;
      basis[leave_slot] = entering;
    }
  }
};

} // namespace

LpResult solve_lp(const LpProblem& p, const LpOptions& options) {
  const int m = static_cast<int>(p.A.rows());
  const int n = static_cast<int>(p.A.cols());
  if (p.b.size() != m || p.lower.size() != n || p.upper.size() != n ||
      p.cost.size() != n)
    throw Error(ErrorKind::DimensionMismatch, "LP data has inconsistent sizes");
  for (int j = 0; j < n; ++j) {
    if (!std::isfinite(p.lower(j)) || !std::isfinite(p.upper(j)) ||
        p.lower(j) > p.upper(j))
      throw Error(ErrorKind::InvalidInput, "LP bounds must be finite and ordered");
  }

  Simplex s(p.A, p.b, options);
  const int total = n + m;
  s.lower = Vector::Zero(total);
  s.upper = Vector::Constant(total, kInf);
  s.cost = Vector::Zero(total);
  s.x = Vector::Zero(total);
  s.state.assign(total, VarState::AtLower);
  s.lower.head(n) = p.lower;
  s.upper.head(n) = p.upper;
  s.x.head(n) = p.lower;

  Vector residual = p.b - p.A * p.lower;
  s.artificial_sign.resize(m);
  s.basis.resize(m);
  for (int i = 0; i < m; ++i) {
    s.artificial_sign[i] = residual(i) >= 0.0 ? 1.0 : -1.0;
    s.basis[i] = n + i;
    s.state[n + i] = VarState::Basic;
    s.x(n + i) = std::abs(residual(i));
    s.cost(n + i) = 1.0;
  }

  s.run();

  LpResult result;
  result.x = s.x.head(n);
  result.residual = m > 0 ? (p.A * result.x - p.b).lpNorm<Eigen::Infinity>() : 0.0;
  if (result.residual > options.feasibility_tol) {
    result.status = LpStatus::Infeasible;
    result.iterations = s.iterations;
    return result;
  }

  // Phase two: artificials pinned to zero, original costs.
  for (int i = 0; i < m; ++i) {
    s.upper(n + i) = 0.0;
    s.cost(n + i) = 0.0;
    if (s.state[n + i] != VarState::Basic) s.x(n + i) = 0.0;
  }
  s.cost.head(n) = p.cost;
  s.run();

  result.x = s.x.head(n);
  for (int j = 0; j < n; ++j)
    result.x(j) = std::clamp(result.x(j), p.lower(j), p.upper(j));
  result.residual = m > 0 ? (p.A * result.x - p.b).lpNorm<Eigen::Infinity>() : 0.0;
  result.objective = p.cost.dot(result.x);
  result.status = LpStatus::Optimal;
  result.iterations = s.iterations;
  return result;
}

} // namespace zonobasis
