#include "zonobasis/construction.hpp"

#include <cmath>
#include <future>
#include <sstream>

#include "zonobasis/certify.hpp"

namespace zonobasis {

const char* to_string(EtaMode m) {
  switch (m) {
  case EtaMode::Fixed: return "fixed";
  case EtaMode::Adaptive: return "adaptive";
  case EtaMode::Off: return "off";
  }
  return "unknown";
}

EtaMode eta_mode_from_string(const std::string& s) {
  if (s == "fixed") return EtaMode::Fixed;
  if (s == "adaptive") return EtaMode::Adaptive;
  if (s == "off") return EtaMode::Off;
  throw Error(ErrorKind::InvalidInput, "unknown eta mode '" + s + "'");
}

namespace {

bool same_matrix(const Matrix& a, const Matrix& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && a == b;
}

int rank_of(const Matrix& m) {
  if (m.cols() == 0) return 0;
  Eigen::FullPivLU<Matrix> lu(m);
  lu.setThreshold(1e-10);
  return static_cast<int>(lu.rank());
}

} // namespace

bool ConstructionTrace::operator==(const ConstructionTrace& o) const {
  return kind == o.kind && dim == o.dim && same_matrix(generators, o.generators) &&
         same_matrix(dual_basis, o.dual_basis) && permutation == o.permutation &&
         same_matrix(A, o.A) && same_matrix(A_inv_T, o.A_inv_T) && eta == o.eta &&
         children == o.children;
}

std::pair<Matrix, std::vector<int>> reorder_generators(const Matrix& gens) {
  const int d = static_cast<int>(gens.rows());
  const int n = static_cast<int>(gens.cols());
  if (n <= d)
    throw Error(ErrorKind::InvalidInput, "reordering needs more generators than dimensions");
  if (rank_of(gens) < d) {
    std::ostringstream os;
    os << "generators have rank " << rank_of(gens) << " < dimension " << d;
    throw Error(ErrorKind::RankDeficient, os.str());
  }
  std::vector<int> perm(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) perm[k] = k;
  if (rank_of(gens.leftCols(n - 1)) < d) {
    for (int victim = 0; victim < n; ++victim) {
      Matrix rest(d, n - 1);
      for (int j = 0, k = 0; j < n; ++j)
        if (j != victim) rest.col(k++) = gens.col(j);
      if (rank_of(rest) == d) {
        perm.clear();
        for (int j = 0; j < n; ++j)
          if (j != victim) perm.push_back(j);
        perm.push_back(victim);
        break;
      }
    }
  }
  Matrix out(d, n);
  for (int k = 0; k < n; ++k) out.col(k) = gens.col(perm[k]);
  return {out, perm};
}

std::pair<Matrix, Matrix> normalize_last(const Matrix& gens) {
  const int d = static_cast<int>(gens.rows());
  const int n = static_cast<int>(gens.cols());
  if (n == 0) throw Error(ErrorKind::InvalidInput, "no generators");
  const Vector u = gens.col(n - 1);
  int pivot = 0;
  for (int i = 0; i < d; ++i)
    if (std::abs(u(i)) >= std::abs(u(pivot))) pivot = i;
  if (u(pivot) == 0.0) throw Error(ErrorKind::InvalidInput, "last generator is zero");

  // Columns of B: e_j for j != pivot (in order), then u. A = B^{-1}.
  Matrix A = Matrix::Zero(d, d);
  for (int j = 0, row = 0; j < d; ++j) {
    if (j == pivot) continue;
    A(row, j) = 1.0;
    A(row, pivot) = -u(j) / u(pivot);
    ++row;
  }
  A(d - 1, pivot) = 1.0 / u(pivot);

  Matrix transformed = A * gens;
  transformed.col(n - 1) = Vector::Unit(d, d - 1);
  return {transformed, A};
}

double choose_eta(const Zonotope& previous, const FrequencySet& previous_set,
                  const EtaConfig& config) {
  if (config.mode == EtaMode::Off) return 0.0;
  if (config.mode == EtaMode::Fixed && !(config.eta > 0.0))
    throw Error(ErrorKind::InvalidInput, "fixed eta must be positive");
  // Moving points by less than half their spacing cannot merge two of them.
  const PointCloud probe = previous_set.window(config.probe_radius);
  const double cap = probe.size() < 2 ? 0.5 : 0.5 * separation(probe);
  if (!(cap > 0.0))
    throw Error(ErrorKind::EtaGaveUp, "previous set has coincident points; no push can separate them");
  if (config.mode == EtaMode::Fixed) return std::min({config.eta, 0.5, cap});
  const IndicatorTransform transform(previous);
  const double reference =
      riesz_estimates(gram_section(transform, previous_set.window(config.probe_radius)))
          .sigma_min;
  double eta = std::min(0.25, cap);
  double last = 0.0;
  for (int halving = 0; halving <= config.max_halvings; ++halving) {
    const FrequencySet pushed = push_from_integers(previous_set, eta);
    last = riesz_estimates(gram_section(transform, pushed.window(config.probe_radius)))
               .sigma_min;
    if (last >= reference / config.kappa) return eta;
    eta *= 0.5;
  }
  std::ostringstream os;
  os << "adaptive eta gave up after " << config.max_halvings
     << " halvings: sigma_min(pushed) = " << last << " vs reference " << reference
     << " (kappa " << config.kappa << ", probe radius " << config.probe_radius << ")";
  throw Error(ErrorKind::EtaGaveUp, os.str());
}

namespace {

ConstructionTrace build(const Matrix& raw, const ConstructionOptions& options,
                        const std::string& path) {
  try {
    const Matrix gens = normalize_generators(raw, options.tol);
    const int d = static_cast<int>(gens.rows());
    const int n = static_cast<int>(gens.cols());
    const int r = rank_of(gens);
    if (r < d) {
      std::ostringstream os;
      os << "generators have rank " << r << " < dimension " << d;
      throw Error(ErrorKind::RankDeficient, os.str());
    }

    ConstructionTrace node;
    node.dim = d;
    node.generators = gens;
    if (n == d) {
      if (std::abs(gens.determinant()) <= options.tol.singular)
        throw Error(ErrorKind::Singular, "parallelepiped generators are singular");
      node.kind = ConstructionTrace::Kind::BaseCase;
      node.dual_basis = gens.transpose().inverse();
      return node;
    }

    node.kind = ConstructionTrace::Kind::InductiveStep;
    auto [ordered, perm] = reorder_generators(gens);
    auto [transformed, A] = normalize_last(ordered);
    node.permutation = std::move(perm);
    node.A = A;
    node.A_inv_T = A.inverse().transpose();

    const Matrix previous = transformed.leftCols(n - 1);
    const Zonotope base = project_base(Zonotope(previous), options.tol);

    ConstructionTrace base_trace, previous_trace;
    if (options.threads > 1) {
      auto fut = std::async(std::launch::async, [&] {
        return build(base.generators(), options, path + "/base");
      });
      previous_trace = build(previous, options, path + "/previous");
      base_trace = fut.get();
    } else {
      base_trace = build(base.generators(), options, path + "/base");
      previous_trace = build(previous, options, path + "/previous");
    }

    node.eta = choose_eta(Zonotope(previous), replay(previous_trace), options.eta);
    node.children.push_back(std::move(base_trace));
    node.children.push_back(std::move(previous_trace));
    return node;
  } catch (const Error& e) {
    const std::string what = e.what();
    if (what.rfind("at node ", 0) == 0) throw;
    throw Error(e.kind(), "at node " + path + ": " + what);
  }
}

} // namespace

Construction construct(const Zonotope& z, const ConstructionOptions& options) {
  Construction out;
  out.trace = build(z.generators(), options, "root");
  out.frequencies = replay(out.trace);
  return out;
}

FrequencySet normalized_frequencies(const ConstructionTrace& trace) {
  if (trace.kind == ConstructionTrace::Kind::BaseCase)
    return FrequencySet::lattice(trace.dual_basis);
  FrequencySet cylinder = cylinder_basis(replay(trace.base_child()));
  FrequencySet previous = replay(trace.previous_child());
  if (trace.eta > 0.0) previous = push_from_integers(previous, trace.eta);
  return FrequencySet::unite(std::move(cylinder), std::move(previous));
}

FrequencySet replay(const ConstructionTrace& trace) {
  if (trace.kind == ConstructionTrace::Kind::BaseCase)
    return FrequencySet::lattice(trace.dual_basis);
  return transform_frequencies(normalized_frequencies(trace), trace.A);
}

} // namespace zonobasis
