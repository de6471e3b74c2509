#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "zonobasis/frequency_set.hpp"
#include "zonobasis/zonotope.hpp"

namespace zonobasis {

struct ConstructionTrace;

/// Minimum pairwise distance inside [-R, R]^d.
double separation(const PointCloud& cloud);
double separation(const FrequencySet& set, double radius);

/// |set n [-R, R]^d| / (2R)^d
double density(const FrequencySet& set, double radius);

/// Finite section G[l, l'] = <e_l', e_l> on L2(Omega), i.e. the indicator
/// transform at l' - l.
struct GramSection {
  PointCloud nodes;
  CMatrix matrix;
  double radius = 0.0;
  double volume = 0.0;
};

GramSection gram_section(const IndicatorTransform& transform, PointCloud nodes,
                         int threads = 1);
GramSection gram_section(const Zonotope& omega, const FrequencySet& set,
                         double radius, int threads = 1);

struct RieszEstimates {
  double sigma_min = 0.0;
  double sigma_max = 0.0;
};

/// Extremal eigenvalues of G / vol(Omega).
RieszEstimates riesz_estimates(const GramSection& gram);

struct InterpolationResult {
  double worst_residual = 0.0;
  /// ratio of extreme eigenvalues of S S^* (infinite when singular)
  double condition = 0.0;
  int rank = 0;
  int nodes = 0;
  long cells = 0;
};

/// Minimal-norm least-squares interpolation of random unit-norm data on the
/// windowed nodes by grid functions on Omega (N cells per axis over the
/// bounding box). Returns the worst relative residual over the trials.
InterpolationResult interpolation_residual(const Zonotope& omega,
                                           const FrequencySet& set, double radius,
                                           int grid, int trials,
                                           std::uint64_t seed, int threads = 1);

/// Discrete sampling Gram S S^* for cells of `omega` on the N^d grid over its
/// bounding box, S[l, c] = exp(-2 pi i <l, x_c>) * cellvolume.
CMatrix sampling_gram(const Zonotope& omega, const PointCloud& nodes, int grid,
                      long* cell_count = nullptr, int threads = 1);

/// Branch-zero structure of the top inductive node, in its normalized
/// coordinates and window [-R, R]^d: the worst violation of
/// |sin(pi y)| <= tol on Gamma x Z and of |sin(pi y)| >= sin(pi eta) - tol
/// on the pushed branch. A pushed node with |sin(pi y)| <= tol counts as a
/// violation of 1. Zero for a clean set or a base case.
double branch_zero_violation(const ConstructionTrace& trace, double radius,
                             double tol = 1e-12);

struct CertifyThresholds {
  double separation_floor = 1e-9;
  double density_tol = 0.05;
  double sigma_floor = 1e-6;
  /// allowed drop of sigma_min across the radius ladder
  double degradation = 10.0;
  /// allowed growth of sigma_max over its value at the first radius
  double growth_cap = 1.05;
  double interpolation_tol = 1e-6;
  bool operator==(const CertifyThresholds&) const = default;
};

struct CertifyConfig {
  std::vector<double> radii{2.0, 4.0, 8.0};
  double density_radius = 50.0;
  double interpolation_radius = 4.0;
  int grid = 256;
  int trials = 10;
  std::uint64_t seed = 1;
  int threads = 1;
  CertifyThresholds thresholds;

  bool operator==(const CertifyConfig&) const = default;
};

enum class Verdict { Pass, Flag, Fail };
const char* to_string(Verdict v);
Verdict verdict_from_string(const std::string& s);

struct CheckResult {
  std::string name;
  Verdict verdict = Verdict::Pass;
  std::string detail;
  bool operator==(const CheckResult&) const = default;
};

struct DensityRow {
  double radius = 0.0;
  long count = 0;
  double density = 0.0;
  bool operator==(const DensityRow&) const = default;
};

struct SpectrumRow {
  double radius = 0.0;
  int nodes = 0;
  double sigma_min = 0.0;
  double sigma_max = 0.0;
  bool operator==(const SpectrumRow&) const = default;
};

struct InterpolationRow {
  double radius = 0.0;
  int grid = 0;
  int trials = 0;
  int nodes = 0;
  long cells = 0;
  double worst_residual = 0.0;
  double condition = 0.0;
  bool operator==(const InterpolationRow&) const = default;
};

struct CertificationReport {
  int dim = 0;
  double volume = 0.0;
  double separation_radius = 0.0;
  double separation = 0.0;
  std::vector<DensityRow> density;
  std::vector<SpectrumRow> spectra;
  std::vector<InterpolationRow> interpolation;
  std::vector<CheckResult> checks;
  CertifyConfig config;

  bool all_pass() const;
  bool operator==(const CertificationReport&) const = default;
};

/// Runs every check over the configured radii. Sub-failures become FAIL
/// entries; nothing here proves the Riesz property, the figures are evidence
/// at the listed truncation radii only.
CertificationReport certify(const Zonotope& omega, const FrequencySet& set,
                            const CertifyConfig& config,
                            const ConstructionTrace* trace = nullptr);

std::string render_text(const CertificationReport& report);
std::string spectra_csv(const CertificationReport& report);
std::string density_csv(const CertificationReport& report);
std::string interpolation_csv(const CertificationReport& report);

} // namespace zonobasis
