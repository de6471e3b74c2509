#include "zonobasis/frequency_set.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <variant>

namespace zonobasis {

const char* to_string(Branch b) {
  switch (b) {
  case Branch::BaseLattice: return "base-lattice";
  case Branch::Cylinder: return "cylinder-branch";
  case Branch::Perturbed: return "perturbed-branch";
  }
  return "unknown";
}

Branch branch_from_string(const std::string& s) {
  if (s == "base-lattice") return Branch::BaseLattice;
  if (s == "cylinder-branch") return Branch::Cylinder;
  if (s == "perturbed-branch") return Branch::Perturbed;
  throw Error(ErrorKind::InvalidInput, "unknown provenance tag '" + s + "'");
}

Box Box::cube(int dim, double radius) {
  return {Vector::Constant(dim, -radius), Vector::Constant(dim, radius)};
}

bool Box::contains(const Vector& p, double eps) const {
  for (int i = 0; i < dim(); ++i)
    if (p(i) < lo(i) - eps || p(i) > hi(i) + eps) return false;
  return true;
}

void PointCloud::sort() {
  std::vector<int> order(static_cast<std::size_t>(size()));
  std::iota(order.begin(), order.end(), 0);
  const int d = dim();
  std::stable_sort(order.begin(), order.end(), [&](int i, int j) {
    for (int k = 0; k < d; ++k) {
      if (points(k, i) < points(k, j)) return true;
      if (points(k, i) > points(k, j)) return false;
    }
    return tags[i] < tags[j];
  });
  Matrix sorted(points.rows(), points.cols());
  std::vector<Branch> sorted_tags(tags.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    sorted.col(static_cast<Eigen::Index>(k)) = points.col(order[k]);
    sorted_tags[k] = tags[order[k]];
  }
  points = std::move(sorted);
  tags = std::move(sorted_tags);
}

namespace {

struct LatticeNode {
  Matrix basis;
  Matrix inverse;
};
struct PointsNode {
  PointCloud cloud;
  double radius;
};
struct ProductNode {
  FrequencySet gamma;
};
struct PushNode {
  FrequencySet child;
  double eta;
};
struct LinearNode {
  FrequencySet child;
  Matrix matrix;
  Matrix inverse;
};
struct UnionNode {
  FrequencySet a, b;
};

double window_eps(const Box& box) {
  double scale = 1.0;
  for (int i = 0; i < box.dim(); ++i)
    scale = std::max({scale, std::abs(box.lo(i)), std::abs(box.hi(i))});
  return 1e-9 * scale;
}

// Bounding box of inverse * box.
Box preimage(const Box& box, const Matrix& inverse, double pad) {
  const Vector center = 0.5 * (box.lo + box.hi);
  const Vector half = 0.5 * (box.hi - box.lo);
  const Vector c = inverse * center;
  const Vector h = inverse.cwiseAbs() * half + Vector::Constant(c.size(), pad);
  return {c - h, c + h};
}

struct Accumulator {
  std::vector<double> coords;
  std::vector<Branch> tags;
  int dim;

  void add(const Vector& p, Branch tag) {
    coords.insert(coords.end(), p.data(), p.data() + p.size());
    tags.push_back(tag);
  }
  PointCloud finish() {
    PointCloud cloud;
    const auto m = static_cast<Eigen::Index>(tags.size());
    cloud.points = Eigen::Map<Matrix>(coords.data(), dim, m);
    cloud.tags = std::move(tags);
    return cloud;
  }
};

} // namespace

struct FrequencySet::Node {
  int dim;
  std::variant<LatticeNode, PointsNode, ProductNode, PushNode, LinearNode, UnionNode>
      body;

  void enumerate(const Box& box, double eps, Accumulator& out) const;
  double known_radius() const;
};

double FrequencySet::Node::known_radius() const {
  constexpr double inf = std::numeric_limits<double>::infinity();
  return std::visit(
      [](const auto& n) -> double {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, LatticeNode>) return inf;
        else if constexpr (std::is_same_v<T, PointsNode>) return n.radius;
        else if constexpr (std::is_same_v<T, ProductNode>) return n.gamma.known_radius();
        else if constexpr (std::is_same_v<T, PushNode>) return n.child.known_radius();
        else if constexpr (std::is_same_v<T, LinearNode>) {
          const double r = n.child.known_radius();
          if (!std::isfinite(r)) return inf;
          return r / n.inverse.cwiseAbs().rowwise().sum().maxCoeff();
        } else
          return std::min(n.a.known_radius(), n.b.known_radius());
      },
      body);
}

void FrequencySet::Node::enumerate(const Box& box, double eps, Accumulator& out) const {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, LatticeNode>) {
          const Box kbox = preimage(box, n.inverse, 1e-9);
          std::vector<long> lo(dim), hi(dim), k(dim);
          for (int i = 0; i < dim; ++i) {
            lo[i] = static_cast<long>(std::ceil(kbox.lo(i)));
            hi[i] = static_cast<long>(std::floor(kbox.hi(i)));
            if (lo[i] > hi[i]) return;
          }
          k = lo;
          Vector kv(dim);
          while (true) {
            for (int i = 0; i < dim; ++i) kv(i) = static_cast<double>(k[i]);
            const Vector p = n.basis * kv;
            if (box.contains(p, eps)) out.add(p, Branch::BaseLattice);
            int i = dim - 1;
            while (i >= 0 && k[i] == hi[i]) {
              k[i] = lo[i];
              --i;
            }
            if (i < 0) break;
            ++k[i];
          }
        } else if constexpr (std::is_same_v<T, PointsNode>) {
          for (int i = 0; i < n.cloud.size(); ++i) {
            const Vector p = n.cloud.point(i);
            if (box.contains(p, eps)) out.add(p, n.cloud.tags[i]);
          }
        } else if constexpr (std::is_same_v<T, ProductNode>) {
          const int base_dim = dim - 1;
          const Box base{box.lo.head(base_dim), box.hi.head(base_dim)};
          Accumulator inner{{}, {}, base_dim};
          n.gamma.node_->enumerate(base, eps, inner);
          const long mlo = static_cast<long>(std::ceil(box.lo(base_dim) - eps));
          const long mhi = static_cast<long>(std::floor(box.hi(base_dim) + eps));
          Vector p(dim);
          const auto count = inner.tags.size();
          for (std::size_t g = 0; g < count; ++g) {
            for (int i = 0; i < base_dim; ++i)
              p(i) = inner.coords[g * static_cast<std::size_t>(base_dim) + static_cast<std::size_t>(i)];
            for (long m = mlo; m <= mhi; ++m) {
              p(base_dim) = static_cast<double>(m);
              out.add(p, Branch::Cylinder);
            }
          }
        } else if constexpr (std::is_same_v<T, PushNode>) {
          Box wide = box;
          wide.lo(dim - 1) -= n.eta;
          wide.hi(dim - 1) += n.eta;
          Accumulator inner{{}, {}, dim};
          n.child.node_->enumerate(wide, eps, inner);
          Vector p(dim);
          const auto count = inner.tags.size();
          for (std::size_t g = 0; g < count; ++g) {
            for (int i = 0; i < dim; ++i)
              p(i) = inner.coords[g * static_cast<std::size_t>(dim) + static_cast<std::size_t>(i)];
            p(dim - 1) = push_coordinate(p(dim - 1), n.eta);
            if (box.contains(p, eps)) out.add(p, Branch::Perturbed);
          }
        } else if constexpr (std::is_same_v<T, LinearNode>) {
          const Box pre = preimage(box, n.inverse, 1e-9);
          Accumulator inner{{}, {}, n.child.dim()};
          n.child.node_->enumerate(pre, window_eps(pre), inner);
          const int cd = n.child.dim();
          Vector q(cd);
          const auto count = inner.tags.size();
          for (std::size_t g = 0; g < count; ++g) {
            for (int i = 0; i < cd; ++i)
              q(i) = inner.coords[g * static_cast<std::size_t>(cd) + static_cast<std::size_t>(i)];
            const Vector p = n.matrix * q;
            if (box.contains(p, eps)) out.add(p, inner.tags[g]);
          }
        } else {
          n.a.node_->enumerate(box, eps, out);
          n.b.node_->enumerate(box, eps, out);
        }
      },
      body);
}

int FrequencySet::dim() const {
  if (!node_) throw Error(ErrorKind::InvalidInput, "empty frequency set");
  return node_->dim;
}

double FrequencySet::known_radius() const {
  if (!node_) return 0.0;
  return node_->known_radius();
}

PointCloud FrequencySet::window(double radius) const {
  return window(Box::cube(dim(), radius));
}

PointCloud FrequencySet::window(const Box& box) const {
  if (box.dim() != dim())
    throw Error(ErrorKind::DimensionMismatch, "window dimension differs from set");
  double reach = 0.0;
  for (int i = 0; i < box.dim(); ++i)
    reach = std::max({reach, std::abs(box.lo(i)), std::abs(box.hi(i))});
  if (reach > known_radius() * (1.0 + 1e-12))
    throw Error(ErrorKind::InvalidInput,
                "window radius " + std::to_string(reach) +
                    " exceeds the stored radius " + std::to_string(known_radius()));
  Accumulator acc{{}, {}, dim()};
  node_->enumerate(box, window_eps(box), acc);
  PointCloud cloud = acc.finish();
  cloud.sort();
  return cloud;
}

namespace {

Matrix checked_inverse(const Matrix& m, double tol, const char* what) {
  if (m.rows() != m.cols())
    throw Error(ErrorKind::DimensionMismatch, std::string(what) + " must be square");
  if (std::abs(m.determinant()) <= tol)
    throw Error(ErrorKind::Singular, std::string(what) + " is singular");
  return m.inverse();
}

} // namespace

FrequencySet FrequencySet::lattice(Matrix basis) {
  Matrix inverse = checked_inverse(basis, 0.0, "lattice basis");
  const int d = static_cast<int>(basis.rows());
  return FrequencySet(std::make_shared<const Node>(
      Node{d, LatticeNode{std::move(basis), std::move(inverse)}}));
}

FrequencySet FrequencySet::from_points(PointCloud cloud, double known_radius) {
  if (static_cast<int>(cloud.tags.size()) != cloud.size())
    throw Error(ErrorKind::InvalidInput, "one tag per point required");
  const int d = cloud.dim();
  if (d <= 0) throw Error(ErrorKind::InvalidInput, "point dimension must be positive");
  return FrequencySet(std::make_shared<const Node>(
      Node{d, PointsNode{std::move(cloud), known_radius}}));
}

FrequencySet FrequencySet::product_with_integers(FrequencySet gamma) {
  const int d = gamma.dim() + 1;
  return FrequencySet(
      std::make_shared<const Node>(Node{d, ProductNode{std::move(gamma)}}));
}

FrequencySet FrequencySet::pushed(FrequencySet set, double eta) {
  if (!(eta > 0.0 && eta <= 0.5))
    throw Error(ErrorKind::InvalidInput, "push distance must lie in (0, 1/2]");
  const int d = set.dim();
  return FrequencySet(
      std::make_shared<const Node>(Node{d, PushNode{std::move(set), eta}}));
}

FrequencySet FrequencySet::linear_image(FrequencySet set, Matrix matrix) {
  if (matrix.cols() != set.dim())
    throw Error(ErrorKind::DimensionMismatch, "matrix does not act on the set dimension");
  Matrix inverse = checked_inverse(matrix, 0.0, "linear map");
  const int d = static_cast<int>(matrix.rows());
  return FrequencySet(std::make_shared<const Node>(
      Node{d, LinearNode{std::move(set), std::move(matrix), std::move(inverse)}}));
}

FrequencySet FrequencySet::unite(FrequencySet a, FrequencySet b) {
  if (a.dim() != b.dim())
    throw Error(ErrorKind::DimensionMismatch, "union of sets with different dimensions");
  const int d = a.dim();
  return FrequencySet(
      std::make_shared<const Node>(Node{d, UnionNode{std::move(a), std::move(b)}}));
}

double push_coordinate(double y, double eta) {
  const double k = std::round(y);
  const double offset = y - k;
  if (std::abs(offset) >= eta) return y;
  return offset < 0.0 ? k - eta : k + eta;
}

FrequencySet parallelepiped_basis(const Matrix& generators, double singular_tol) {
  Matrix dual = checked_inverse(generators.transpose(), singular_tol, "parallelepiped generators");
  return FrequencySet::lattice(std::move(dual));
}

FrequencySet cylinder_basis(const FrequencySet& gamma) {
  return FrequencySet::product_with_integers(gamma);
}

FrequencySet push_from_integers(const FrequencySet& set, double eta) {
  return FrequencySet::pushed(set, eta);
}

FrequencySet transform_frequencies(const FrequencySet& set, const Matrix& A,
                                   double singular_tol) {
  checked_inverse(A, singular_tol, "transform");
  return FrequencySet::linear_image(set, A.transpose());
}

} // namespace zonobasis
