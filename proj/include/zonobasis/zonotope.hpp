#pragma once

#include <vector>

#include "zonobasis/lp.hpp"
#include "zonobasis/types.hpp"

namespace zonobasis {

/// Zonotope c + sum_j t_j u_j with t_j in [-1/2, 1/2]. Generators are the
/// columns of `generators` (dim x n).
class Zonotope {
public:
  Zonotope() = default;
  explicit Zonotope(Matrix generators);
  Zonotope(Matrix generators, Vector center);

  int dim() const { return static_cast<int>(center_.size()); }
  int count() const { return static_cast<int>(generators_.cols()); }
  const Matrix& generators() const { return generators_; }
  const Vector& center() const { return center_; }
  int rank() const;

private:
  Matrix generators_;
  Vector center_;
};

/// y-interval [a, b] of a fiber over a base point.
struct Fiber {
  double a = 0.0;
  double b = 0.0;
  double length() const { return b - a; }
};

struct GeometryTolerances {
  double lp = 1e-9;
  double collinear = 1e-12;
  double singular = 1e-12;
};

/// Merges collinear generators. Each group keeps the direction of its first
/// member; later members are flipped to align before summing.
Matrix normalize_generators(const Matrix& generators,
                            const GeometryTolerances& tol = {});
Zonotope normalized(const Zonotope& z, const GeometryTolerances& tol = {});

bool contains(const Zonotope& z, const Vector& p,
              const GeometryTolerances& tol = {});

/// Fiber over x (a point in the first dim-1 coordinates). Throws
/// ErrorKind::InfeasibleFiber when x is outside the projection.
Fiber fiber(const Zonotope& z, const Vector& x,
            const GeometryTolerances& tol = {});

/// Same as fiber() but reports infeasibility through the return value.
bool try_fiber(const Zonotope& z, const Vector& x, Fiber& out,
               const GeometryTolerances& tol = {});

/// Image under (x, y) -> x, with generators renormalized. Zero projections
/// are dropped.
Zonotope project_base(const Zonotope& z, const GeometryTolerances& tol = {});

/// Sum over d-subsets S of |det U_S|.
double volume(const Zonotope& z);

/// sin(pi t) / (pi t), with a series branch near zero.
template <typename Scalar>
Scalar sinc(Scalar t) {
  constexpr Scalar pi = Scalar(3.141592653589793238462643383279502884L);
  const Scalar x = pi * t;
  if (std::abs(t) < Scalar(1e-4)) {
    const Scalar x2 = x * x;
    return Scalar(1) - x2 / Scalar(6) + x2 * x2 / Scalar(120);
  }
  return std::sin(x) / x;
}

/// One tile of the fine zonotopal tiling: the parallelepiped spanned by the
/// generators in `subset`, translated by `offset`.
struct Tile {
  std::vector<int> subset;
  Vector offset;
  double weight = 0.0; // |det U_S|
};

/// Parallelepiped tiling of a full-rank zonotope, read off the lower faces of
/// a generic lift into one dimension up. Throws RankDeficient if vol = 0.
std::vector<Tile> fine_tiling(const Zonotope& z,
                              const GeometryTolerances& tol = {});

/// Precomputed tiling for repeated transform evaluations.
class IndicatorTransform {
public:
  explicit IndicatorTransform(const Zonotope& z,
                              const GeometryTolerances& tol = {});

  /// int_Z exp(-2 pi i <xi, x>) dx
  Complex operator()(const Vector& xi) const;
  double volume() const { return volume_; }
  const Zonotope& zonotope() const { return zonotope_; }
  const std::vector<Tile>& tiles() const { return tiles_; }

private:
  Zonotope zonotope_;
  std::vector<Tile> tiles_;
  double volume_ = 0.0;
};

Complex indicator_ft(const Zonotope& z, const Vector& xi);

/// All d-subsets of {0, ..., n-1} in lexicographic order.
std::vector<std::vector<int>> subsets(int n, int d);

} // namespace zonobasis
