#include "zonobasis/zonotope.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <sstream>

namespace zonobasis {

Zonotope::Zonotope(Matrix generators)
    : Zonotope(generators, Vector::Zero(generators.rows())) {}

Zonotope::Zonotope(Matrix generators, Vector center)
    : generators_(std::move(generators)), center_(std::move(center)) {
  if (generators_.rows() != center_.size())
    throw Error(ErrorKind::DimensionMismatch,
                "generator rows must match center dimension");
  if (center_.size() == 0)
    throw Error(ErrorKind::InvalidInput, "zonotope dimension must be positive");
  for (Eigen::Index j = 0; j < generators_.cols(); ++j) {
    if (generators_.col(j).squaredNorm() == 0.0 ||
        !generators_.col(j).allFinite()) {
      std::ostringstream os;
      os << "generator " << j << " is zero or non-finite";
      throw Error(ErrorKind::InvalidInput, os.str());
    }
  }
}

int Zonotope::rank() const {
  if (count() == 0) return 0;
  Eigen::FullPivLU<Matrix> lu(generators_);
  lu.setThreshold(1e-10);
  return static_cast<int>(lu.rank());
}

namespace {

double sin_angle(const Vector& u, const Vector& v) {
  const Vector rejection = v - (u.dot(v) / u.squaredNorm()) * u;
  return rejection.norm() / v.norm();
}

} // namespace

Matrix normalize_generators(const Matrix& gens, const GeometryTolerances& tol) {
  std::vector<Vector> merged;
  std::vector<Vector> directions;
  for (Eigen::Index j = 0; j < gens.cols(); ++j) {
    const Vector u = gens.col(j);
    if (u.squaredNorm() == 0.0)
      throw Error(ErrorKind::InvalidInput, "zero generator");
    bool absorbed = false;
    for (std::size_t g = 0; g < merged.size(); ++g) {
      if (sin_angle(directions[g], u) < tol.collinear) {
        merged[g] += u.dot(directions[g]) >= 0.0 ? u : Vector(-u);
        absorbed = true;
        break;
      }
    }
    if (!absorbed) {
      merged.push_back(u);
      directions.push_back(u);
    }
  }
  Matrix out(gens.rows(), static_cast<Eigen::Index>(merged.size()));
  for (std::size_t g = 0; g < merged.size(); ++g)
    out.col(static_cast<Eigen::Index>(g)) = merged[g];
  return out;
}

Zonotope normalized(const Zonotope& z, const GeometryTolerances& tol) {
  return Zonotope(normalize_generators(z.generators(), tol), z.center());
}

bool contains(const Zonotope& z, const Vector& p, const GeometryTolerances& tol) {
  if (p.size() != z.dim())
    throw Error(ErrorKind::DimensionMismatch, "point dimension differs from zonotope");
  const int n = z.count();
  LpProblem lp;
  lp.A = z.generators();
  lp.b = p - z.center();
  lp.lower = Vector::Constant(n, -0.5);
  lp.upper = Vector::Constant(n, 0.5);
  lp.cost = Vector::Zero(n);
  LpOptions opt;
  opt.feasibility_tol = tol.lp;
  return solve_lp(lp, opt).status == LpStatus::Optimal;
}

bool try_fiber(const Zonotope& z, const Vector& x, Fiber& out,
               const GeometryTolerances& tol) {
  const int d = z.dim();
  if (x.size() != d - 1)
    throw Error(ErrorKind::DimensionMismatch, "fiber base point must have dim-1 coordinates");
  const int n = z.count();
  LpProblem lp;
  lp.A = z.generators().topRows(d - 1);
  lp.b = x - z.center().head(d - 1);
  lp.lower = Vector::Constant(n, -0.5);
  lp.upper = Vector::Constant(n, 0.5);
  lp.cost = z.generators().row(d - 1).transpose();
  LpOptions opt;
  opt.feasibility_tol = tol.lp;

  const LpResult lo = solve_lp(lp, opt);
  if (lo.status != LpStatus::Optimal) return false;
  lp.cost = -lp.cost;
  const LpResult hi = solve_lp(lp, opt);
  if (hi.status != LpStatus::Optimal) return false;

  const double cy = z.center()(d - 1);
  out.a = lo.objective + cy;
  out.b = -hi.objective + cy;
  if (out.b < out.a) out.b = out.a = 0.5 * (out.a + out.b);
  return true;
}

Fiber fiber(const Zonotope& z, const Vector& x, const GeometryTolerances& tol) {
  Fiber f;
  if (!try_fiber(z, x, f, tol)) {
    std::ostringstream os;
    os << "point (" << x.transpose() << ") lies outside the base projection";
    throw Error(ErrorKind::InfeasibleFiber, os.str());
  }
  return f;
}

Zonotope project_base(const Zonotope& z, const GeometryTolerances& tol) {
  const int d = z.dim();
  if (d < 2)
    throw Error(ErrorKind::InvalidInput, "projection needs dimension >= 2");
  const Matrix proj = z.generators().topRows(d - 1);
  double scale = 0.0;
  for (Eigen::Index j = 0; j < proj.cols(); ++j)
    scale = std::max(scale, z.generators().col(j).norm());
  std::vector<Eigen::Index> keep;
  for (Eigen::Index j = 0; j < proj.cols(); ++j)
    if (proj.col(j).norm() > tol.singular * std::max(scale, 1.0)) keep.push_back(j);
  Matrix kept(d - 1, static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k)
    kept.col(static_cast<Eigen::Index>(k)) = proj.col(keep[k]);
  return Zonotope(normalize_generators(kept, tol), z.center().head(d - 1));
}

std::vector<std::vector<int>> subsets(int n, int d) {
  std::vector<std::vector<int>> out;
  if (d > n || d < 0) return out;
  std::vector<int> idx(d);
  for (int i = 0; i < d; ++i) idx[i] = i;
  while (true) {
    out.push_back(idx);
    int i = d - 1;
    while (i >= 0 && idx[i] == n - d + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int k = i + 1; k < d; ++k) idx[k] = idx[k - 1] + 1;
  }
  return out;
}

namespace {

Matrix select_columns(const Matrix& m, const std::vector<int>& cols) {
  Matrix out(m.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k)
    out.col(static_cast<Eigen::Index>(k)) = m.col(cols[k]);
  return out;
}

// Deterministic heights in [0, 1) built from raw engine bits.
Vector lift_heights(int n, std::uint64_t attempt) {
  std::mt19937_64 gen(0x5eed0000ULL + attempt);
  Vector h(n);
  for (int j = 0; j < n; ++j)
    h(j) = static_cast<double>(gen() >> 11) * 0x1.0p-53;
  return h;
}

} // namespace

double volume(const Zonotope& z) {
  const int d = z.dim();
  double total = 0.0;
  for (const auto& s : subsets(z.count(), d))
    total += std::abs(select_columns(z.generators(), s).determinant());
  return total;
}

std::vector<Tile> fine_tiling(const Zonotope& z, const GeometryTolerances& tol) {
  const int d = z.dim();
  const int n = z.count();
  const Matrix& U = z.generators();

  struct Basis {
    std::vector<int> subset;
    Eigen::PartialPivLU<Matrix> lu;
    double weight;
  };
  std::vector<Basis> bases;
  for (const auto& s : subsets(n, d)) {
    Matrix us = select_columns(U, s);
    const double det = std::abs(us.determinant());
    if (det > tol.singular) bases.push_back({s, Eigen::PartialPivLU<Matrix>(us), det});
  }
  if (bases.empty())
    throw Error(ErrorKind::RankDeficient, "zonotope has zero volume");

  for (std::uint64_t attempt = 0; attempt < 64; ++attempt) {
    const Vector h = lift_heights(n, attempt);
    std::vector<Tile> tiles;
    bool generic = true;
    for (const auto& basis : bases) {
      Vector hs(d);
      for (int k = 0; k < d; ++k) hs(k) = h(basis.subset[k]);
      // nu solves U_S' nu = h_S
      const Vector nu = basis.lu.transpose().solve(hs);
      Tile tile{basis.subset, Vector::Zero(d), basis.weight};
      std::size_t next = 0;
      for (int j = 0; j < n; ++j) {
        if (next < basis.subset.size() && basis.subset[next] == j) {
          ++next;
          continue;
        }
        const double slack = h(j) - nu.dot(U.col(j));
        if (std::abs(slack) < 1e-9) {
          generic = false;
          break;
        }
        tile.offset -= (slack > 0 ? 0.5 : -0.5) * U.col(j);
      }
      if (!generic) break;
      tiles.push_back(std::move(tile));
    }
    if (generic) return tiles;
  }
  throw Error(ErrorKind::SolverBreakdown, "no generic lift found for tiling");
}

IndicatorTransform::IndicatorTransform(const Zonotope& z,
                                       const GeometryTolerances& tol)
    : zonotope_(z), tiles_(fine_tiling(z, tol)) {
  for (const auto& t : tiles_) volume_ += t.weight;
}

Complex IndicatorTransform::operator()(const Vector& xi) const {
  if (xi.size() != zonotope_.dim())
    throw Error(ErrorKind::DimensionMismatch, "frequency dimension differs from zonotope");
  constexpr double two_pi = 2.0 * std::numbers::pi;
  const Matrix& U = zonotope_.generators();
  const Vector projected = U.transpose() * xi;
  Complex sum = 0.0;
  for (const auto& t : tiles_) {
    double amplitude = t.weight;
    for (int j : t.subset) amplitude *= sinc(projected(j));
    const double phase = -two_pi * xi.dot(t.offset);
    sum += amplitude * Complex(std::cos(phase), std::sin(phase));
  }
  const double phase = -two_pi * xi.dot(zonotope_.center());
  return sum * Complex(std::cos(phase), std::sin(phase));
}

Complex indicator_ft(const Zonotope& z, const Vector& xi) {
  return IndicatorTransform(z)(xi);
}

} // namespace zonobasis
