#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "zonobasis/types.hpp"

namespace zonobasis {

/// Which part of the recursion a frequency came from.
enum class Branch : std::uint8_t { BaseLattice, Cylinder, Perturbed };

const char* to_string(Branch b);
Branch branch_from_string(const std::string& s);

/// Closed axis-aligned box.
struct Box {
  Vector lo;
  Vector hi;

  static Box cube(int dim, double radius);
  int dim() const { return static_cast<int>(lo.size()); }
  bool contains(const Vector& p, double eps) const;
};

/// Finite list of frequencies (columns of `points`) with provenance tags.
struct PointCloud {
  Matrix points;
  std::vector<Branch> tags;

  int dim() const { return static_cast<int>(points.rows()); }
  int size() const { return static_cast<int>(points.cols()); }
  Vector point(int i) const { return points.col(i); }

  /// Lexicographic order on coordinates, tag as tie-break.
  void sort();
};

/// Lazily enumerable frequency set. The set is an expression over lattices,
/// products with Z, pushes away from integer heights, linear images and
/// unions; concrete points are produced only for a requested window.
class FrequencySet {
public:
  struct Node;

  FrequencySet() = default;

  /// basis * Z^d
  static FrequencySet lattice(Matrix basis);
  /// Fixed point list. `known_radius` bounds the windows that may be
  /// requested (the list is assumed complete inside [-R, R]^d).
  static FrequencySet from_points(PointCloud cloud, double known_radius);
  /// gamma x Z
  static FrequencySet product_with_integers(FrequencySet gamma);
  /// Last coordinate moved to the nearest point at distance >= eta from Z.
  static FrequencySet pushed(FrequencySet set, double eta);
  /// matrix * set
  static FrequencySet linear_image(FrequencySet set, Matrix matrix);
  static FrequencySet unite(FrequencySet a, FrequencySet b);

  bool empty() const { return node_ == nullptr; }
  int dim() const;
  /// Largest radius for which window() is complete (infinity for lazy sets).
  double known_radius() const;

  /// Sorted points of the set inside the closed cube [-R, R]^d.
  PointCloud window(double radius) const;
  PointCloud window(const Box& box) const;

private:
  explicit FrequencySet(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// Closest point to y in R minus the open bands (k - eta, k + eta); integer
/// ties go up.
double push_coordinate(double y, double eta);

/// Dual lattice (U')^{-1} Z^d of a parallelepiped; center only shifts phases.
FrequencySet parallelepiped_basis(const Matrix& generators,
                                  double singular_tol = 1e-12);
FrequencySet cylinder_basis(const FrequencySet& gamma);
FrequencySet push_from_integers(const FrequencySet& set, double eta);
/// A' set: frequencies for Omega given those for A * Omega.
FrequencySet transform_frequencies(const FrequencySet& set, const Matrix& A,
                                   double singular_tol = 1e-12);

} // namespace zonobasis
