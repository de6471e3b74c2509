#include <doctest.h>

#include <random>

#include "zonobasis/lp.hpp"

using namespace zonobasis;

namespace {

// Minimum over all bounded-variable vertices: every choice of m basic columns
// and of a bound for each nonbasic variable.
double brute_force_min(const LpProblem& p, bool& feasible) {
  const int m = static_cast<int>(p.A.rows());
  const int n = static_cast<int>(p.A.cols());
  double best = INFINITY;
  feasible = false;
  for (int mask = 0; mask < (1 << n); ++mask) {
    if (__builtin_popcount(mask) != m) continue;
    std::vector<int> basic, nonbasic;
    for (int j = 0; j < n; ++j) (mask >> j & 1 ? basic : nonbasic).push_back(j);
    Matrix B(m, m);
    for (int k = 0; k < m; ++k) B.col(k) = p.A.col(basic[k]);
    Eigen::FullPivLU<Matrix> lu(B);
    if (lu.rank() < m) continue;
    for (int side = 0; side < (1 << nonbasic.size()); ++side) {
      Vector x(n);
      for (std::size_t k = 0; k < nonbasic.size(); ++k) {
        const int j = nonbasic[k];
        x(j) = side >> k & 1 ? p.upper(j) : p.lower(j);
      }
      Vector rhs = p.b;
      for (int j : nonbasic) rhs -= p.A.col(j) * x(j);
      const Vector xb = lu.solve(rhs);
      bool ok = true;
      for (int k = 0; k < m; ++k) {
        x(basic[k]) = xb(k);
        ok = ok && xb(k) >= p.lower(basic[k]) - 1e-9 && xb(k) <= p.upper(basic[k]) + 1e-9;
      }
      if (!ok) continue;
      feasible = true;
      best = std::min(best, p.cost.dot(x));
    }
  }
  return best;
}

} // namespace

TEST_CASE("box-constrained maximum of x + y") {
  LpProblem p;
  p.A = Matrix{{1.0, 1.0, 1.0}};
  p.b = Vector::Constant(1, 1.5);
  p.lower = Vector::Zero(3);
  p.upper = Vector::Ones(3);
  p.cost = Vector{{-1.0, -1.0, 0.0}};
  const LpResult r = solve_lp(p);
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.objective == doctest::Approx(-1.5).epsilon(1e-12));
  CHECK(r.residual <= 1e-12);
}

TEST_CASE("infeasible bounds are reported") {
  LpProblem p;
  p.A = Matrix{{1.0, 1.0}};
  p.b = Vector::Constant(1, 3.0);
  p.lower = Vector::Zero(2);
  p.upper = Vector::Ones(2);
  p.cost = Vector::Zero(2);
  const LpResult r = solve_lp(p);
  CHECK(r.status == LpStatus::Infeasible);
  CHECK(r.residual == doctest::Approx(1.0));
}

TEST_CASE("negative right-hand sides and free-looking bounds") {
  LpProblem p;
  p.A = Matrix{{1.0, -2.0, 0.0}, {0.0, 1.0, 1.0}};
  p.b = Vector{{-3.0, -1.0}};
  p.lower = Vector::Constant(3, -100.0);
  p.upper = Vector::Constant(3, 100.0);
  p.cost = Vector{{1.0, 0.0, 0.0}};
  const LpResult r = solve_lp(p);
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.objective == doctest::Approx(-100.0));
  CHECK((p.A * r.x - p.b).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("degenerate problem terminates under Bland's rule") {
  // Beale's cycling example with slacks, bounded by a large box.
  LpProblem p;
  p.A = Matrix{{0.25, -60.0, -0.04, 9.0, 1.0, 0.0, 0.0},
               {0.5, -90.0, -0.02, 3.0, 0.0, 1.0, 0.0},
               {0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0}};
  p.b = Vector{{0.0, 0.0, 1.0}};
  p.lower = Vector::Zero(7);
  p.upper = Vector::Constant(7, 1e3);
  p.cost = Vector{{-0.75, 150.0, -0.02, 6.0, 0.0, 0.0, 0.0}};
  const LpResult r = solve_lp(p);
  REQUIRE(r.status == LpStatus::Optimal);
  bool feasible = false;
  const double best = brute_force_min(p, feasible);
  REQUIRE(feasible);
  CHECK(r.objective == doctest::Approx(best).epsilon(1e-9));
  CHECK(r.iterations < 100);
}

TEST_CASE("random small problems match vertex enumeration") {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int solved = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int m = 2 + trial % 2, n = 5;
    LpProblem p;
    p.A = Matrix::NullaryExpr(m, n, [&] { return u(gen); });
    p.lower = Vector::NullaryExpr(n, [&] { return -1.0 + 0.5 * u(gen); });
    p.upper = p.lower + Vector::NullaryExpr(n, [&] { return 1.5 + u(gen); });
    const Vector inside = 0.5 * (p.lower + p.upper) + 0.3 * Vector::NullaryExpr(n, [&] { return u(gen); });
    p.b = p.A * inside;
    if (trial % 5 == 0) p.b *= 20.0;
    p.cost = Vector::NullaryExpr(n, [&] { return u(gen); });
    bool feasible = false;
    const double best = brute_force_min(p, feasible);
    const LpResult r = solve_lp(p);
    CHECK((r.status == LpStatus::Optimal) == feasible);
    if (feasible && r.status == LpStatus::Optimal) {
      CHECK(r.objective == doctest::Approx(best).epsilon(1e-8));
      CHECK((r.x - r.x.cwiseMax(p.lower).cwiseMin(p.upper)).norm() <= 1e-12);
      ++solved;
    }
  }
  CHECK(solved > 100);
}

TEST_CASE("identical input gives an identical pivot sequence") {
  LpProblem p;
  p.A = Matrix{{1.0, 2.0, 1.0, 0.0}, {3.0, 1.0, 0.0, 1.0}};
  p.b = Vector{{2.0, 3.0}};
  p.lower = Vector::Zero(4);
  p.upper = Vector::Constant(4, 5.0);
  p.cost = Vector{{-1.0, -1.0, 0.0, 0.0}};
  const LpResult a = solve_lp(p), b = solve_lp(p);
  CHECK(a.iterations == b.iterations);
  CHECK(a.x == b.x);
  CHECK(a.objective == doctest::Approx(-1.4));
}
