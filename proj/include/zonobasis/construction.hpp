#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "zonobasis/cylindric.hpp"
#include "zonobasis/frequency_set.hpp"
#include "zonobasis/zonotope.hpp"

namespace zonobasis {

enum class EtaMode {
  Fixed,
  Adaptive,
  /// Negative control: the previous set is not pushed off the integer
  /// heights. The result is not a basis; it exists to be flagged.
  Off,
};

const char* to_string(EtaMode m);
EtaMode eta_mode_from_string(const std::string& s);

struct EtaConfig {
  EtaMode mode = EtaMode::Fixed;
  double eta = 0.2;
  /// adaptive: accept eta once sigma_min(pushed) >= sigma_min(original) / kappa
  double kappa = 2.0;
  int max_halvings = 20;
  double probe_radius = 3.0;

  bool operator==(const EtaConfig&) const = default;
};

struct ConstructionOptions {
  EtaConfig eta;
  GeometryTolerances tol;
  /// > 1 lets the two recursive branches run concurrently
  int threads = 1;
};

/// Recursion tree of one construct() call. Inductive nodes keep the
/// permutation and linear normalization they applied, the push distance,
/// and the traces for the base (dim - 1) and the peeled zonotope (dim).
struct ConstructionTrace {
  enum class Kind { BaseCase, InductiveStep };

  Kind kind = Kind::BaseCase;
  int dim = 0;
  /// generators handled at this node, in this node's coordinates
  Matrix generators;
  /// base case: rows of (U')^{-1}
  Matrix dual_basis;
  std::vector<int> permutation;
  Matrix A;
  Matrix A_inv_T;
  /// 0 when the push was disabled
  double eta = 0.0;
  std::vector<ConstructionTrace> children;

  const ConstructionTrace& base_child() const { return children.at(0); }
  const ConstructionTrace& previous_child() const { return children.at(1); }
  bool operator==(const ConstructionTrace&) const;
};

struct Construction {
  FrequencySet frequencies;
  ConstructionTrace trace;
};

/// Permutation whose first n-1 vectors span; perm[k] is the original index of
/// the k-th output column.
std::pair<Matrix, std::vector<int>> reorder_generators(const Matrix& generators);

/// A with A u_n = e_d, built by completing u_n with standard basis vectors
/// (dropping the coordinate where |u_n| is largest, last one on ties).
std::pair<Matrix, Matrix> normalize_last(const Matrix& generators);

double choose_eta(const Zonotope& previous, const FrequencySet& previous_set,
                  const EtaConfig& config);

Construction construct(const Zonotope& z, const ConstructionOptions& options = {});

/// Rebuilds the frequency set recorded in a trace without re-deciding
/// anything.
FrequencySet replay(const ConstructionTrace& trace);

/// The union (Gamma x Z) u pushed(previous) before the pull-back by A'.
/// For a base-case trace this is the dual lattice itself.
FrequencySet normalized_frequencies(const ConstructionTrace& trace);

} // namespace zonobasis
