#include "zonobasis/certify.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>

#include "zonobasis/construction.hpp"
#include "zonobasis/parallel.hpp"
#include "zonobasis/random.hpp"

namespace zonobasis {

const char* to_string(Verdict v) {
  switch (v) {
  case Verdict::Pass: return "PASS";
  case Verdict::Flag: return "FLAG";
  case Verdict::Fail: return "FAIL";
  }
  return "FAIL";
}

Verdict verdict_from_string(const std::string& s) {
  if (s == "PASS") return Verdict::Pass;
  if (s == "FLAG") return Verdict::Flag;
  if (s == "FAIL") return Verdict::Fail;
  throw Error(ErrorKind::InvalidInput, "unknown verdict '" + s + "'");
}

bool CertificationReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CheckResult& c) { return c.verdict == Verdict::Pass; });
}

double separation(const PointCloud& cloud) {
  if (cloud.size() < 2)
    throw Error(ErrorKind::EmptyWindow, "separation needs at least two points");
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < cloud.size(); ++i)
    for (int j = i + 1; j < cloud.size(); ++j)
      best = std::min(best, (cloud.points.col(i) - cloud.points.col(j)).squaredNorm());
  return std::sqrt(best);
}

double separation(const FrequencySet& set, double radius) {
  return separation(set.window(radius));
}

double density(const FrequencySet& set, double radius) {
  if (!(radius >= 1.0))
    throw Error(ErrorKind::InvalidInput, "density radius must be at least 1");
  const PointCloud cloud = set.window(radius);
  return static_cast<double>(cloud.size()) / std::pow(2.0 * radius, set.dim());
}

GramSection gram_section(const IndicatorTransform& transform, PointCloud nodes,
                         int threads) {
  const int m = nodes.size();
  if (m == 0) throw Error(ErrorKind::EmptyWindow, "gram section of an empty window");
  if (nodes.dim() != transform.zonotope().dim())
    throw Error(ErrorKind::DimensionMismatch, "frequency and domain dimensions differ");
  GramSection g;
  g.volume = transform.volume();
  g.matrix.resize(m, m);
  parallel_for(m, threads, [&](int i) {
    g.matrix(i, i) = Complex(g.volume, 0.0);
    for (int j = i + 1; j < m; ++j)
      g.matrix(i, j) = transform(Vector(nodes.points.col(j) - nodes.points.col(i)));
  });
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) g.matrix(j, i) = std::conj(g.matrix(i, j));
  g.nodes = std::move(nodes);
  return g;
}

GramSection gram_section(const Zonotope& omega, const FrequencySet& set,
                         double radius, int threads) {
  if (!(volume(omega) > 0.0))
    throw Error(ErrorKind::RankDeficient, "gram section needs a full-dimensional domain");
  GramSection g = gram_section(IndicatorTransform(omega), set.window(radius), threads);
  g.radius = radius;
  return g;
}

RieszEstimates riesz_estimates(const GramSection& gram) {
  if (gram.matrix.size() == 0)
    throw Error(ErrorKind::EmptyWindow, "empty gram section");
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(gram.matrix / gram.volume,
                                                Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw Error(ErrorKind::SolverBreakdown, "hermitian eigensolver did not converge");
  const auto& ev = solver.eigenvalues();
  return {ev(0), ev(ev.size() - 1)};
}

namespace {

// sum_{k=0}^{L-1} exp(-2 pi i t (k - (L-1)/2)) = sin(pi t L) / sin(pi t)
double dirichlet(double t, long length) {
  const double m = std::round(t);
  const double eps = t - m;
  const bool odd = (static_cast<long long>(m) * (length - 1)) % 2 != 0;
  double value;
  if (std::abs(eps) < 1e-10)
    value = static_cast<double>(length);
  else
    value = std::sin(std::numbers::pi * eps * static_cast<double>(length)) /
            std::sin(std::numbers::pi * eps);
  return odd ? -value : value;
}

struct Column {
  Vector x;
  long first;
  long length;
};

struct CellGrid {
  Vector lo;
  Vector step;
  int n;
  std::vector<Column> columns;
  long cells = 0;
  double cell_volume = 0.0;
};

CellGrid cells_of(const Zonotope& omega, int n) {
  const int d = omega.dim();
  CellGrid grid;
  const Vector half = 0.5 * omega.generators().cwiseAbs().rowwise().sum();
  grid.lo = omega.center() - half;
  grid.step = 2.0 * half / static_cast<double>(n);
  grid.n = n;
  grid.cell_volume = grid.step.prod();
  const double tol = 1e-9;

  const double ylo = grid.lo(d - 1);
  const double dy = grid.step(d - 1);
  long columns = 1;
  for (int i = 0; i + 1 < d; ++i) columns *= n;
  std::vector<long> idx(static_cast<std::size_t>(std::max(d - 1, 0)), 0);
  for (long c = 0; c < columns; ++c) {
    long rem = c;
    Vector x(d - 1);
    for (int i = d - 2; i >= 0; --i) {
      x(i) = grid.lo(i) + (static_cast<double>(rem % n) + 0.5) * grid.step(i);
      rem /= n;
    }
    Fiber f;
    if (d == 1) {
      f = {omega.center()(0) - half(0), omega.center()(0) + half(0)};
    } else if (!try_fiber(omega, x, f)) {
      continue;
    }
    long first = static_cast<long>(std::ceil((f.a - tol - ylo) / dy - 0.5));
    long last = static_cast<long>(std::floor((f.b + tol - ylo) / dy - 0.5));
    first = std::max(first, 0L);
    last = std::min(last, static_cast<long>(n) - 1);
    if (last < first) continue;
    grid.columns.push_back({x, first, last - first + 1});
    grid.cells += last - first + 1;
  }
  return grid;
}

} // namespace

CMatrix sampling_gram(const Zonotope& omega, const PointCloud& nodes, int n,
                      long* cell_count, int threads) {
  const int d = omega.dim();
  if (nodes.dim() != d)
    throw Error(ErrorKind::DimensionMismatch, "frequency and domain dimensions differ");
  if (n < 1 || (n & (n - 1)) != 0)
    throw Error(ErrorKind::InvalidInput, "grid resolution must be a power of two");
  const CellGrid grid = cells_of(omega, n);
  if (cell_count) *cell_count = grid.cells;
  const int m = nodes.size();
  const double w2 = grid.cell_volume * grid.cell_volume;
  const double two_pi = 2.0 * std::numbers::pi;
  const double ylo = grid.lo(d - 1);
  const double dy = grid.step(d - 1);

  CMatrix out(m, m);
  parallel_for(m, threads, [&](int p) {
    out(p, p) = Complex(w2 * static_cast<double>(grid.cells), 0.0);
    for (int q = p + 1; q < m; ++q) {
      const Vector xi = nodes.points.col(p) - nodes.points.col(q);
      const double xy = xi(d - 1);
      Complex sum = 0.0;
      for (const Column& col : grid.columns) {
        const double mid =
            ylo + (static_cast<double>(col.first) + 0.5 * static_cast<double>(col.length - 1) + 0.5) * dy;
        double phase = xy * mid;
        for (int i = 0; i + 1 < d; ++i) phase += xi(i) * col.x(i);
        phase *= -two_pi;
        sum += dirichlet(xy * dy, col.length) * Complex(std::cos(phase), std::sin(phase));
      }
      out(p, q) = w2 * sum;
    }
  });
  for (int p = 0; p < m; ++p)
    for (int q = p + 1; q < m; ++q) out(q, p) = std::conj(out(p, q));
  return out;
}

InterpolationResult interpolation_residual(const Zonotope& omega,
                                           const FrequencySet& set, double radius,
                                           int grid, int trials, std::uint64_t seed,
                                           int threads) {
  const PointCloud nodes = set.window(radius);
  const int m = nodes.size();
  if (m == 0) throw Error(ErrorKind::EmptyWindow, "interpolation window is empty");
  InterpolationResult result;
  result.nodes = m;
  const CMatrix gram = sampling_gram(omega, nodes, grid, &result.cells, threads);

  Eigen::SelfAdjointEigenSolver<CMatrix> solver(gram);
  if (solver.info() != Eigen::Success) {
    std::ostringstream os;
    os << "eigensolver breakdown on the " << m << "x" << m
       << " sampling gram (diagonal " << gram(0, 0).real() << ")";
    throw Error(ErrorKind::SolverBreakdown, os.str());
  }
  const Vector& mu = solver.eigenvalues();
  const CMatrix& V = solver.eigenvectors();
  const double top = mu(m - 1);
  const double cutoff = top * 1e-12;
  Vector inverse(m);
  for (int k = 0; k < m; ++k) {
    inverse(k) = mu(k) > cutoff ? 1.0 / mu(k) : 0.0;
    if (mu(k) > cutoff) ++result.rank;
  }
  result.condition = mu(0) > 0.0 ? top / mu(0) : std::numeric_limits<double>::infinity();

  Rng rng(seed);
  for (int t = 0; t < trials; ++t) {
    CVector c(m);
    for (int k = 0; k < m; ++k) c(k) = Complex(rng.normal(), rng.normal());
    c /= c.norm();
    // minimal-norm solution f = S^* y with y = (S S^*)^+ c, so S f = gram y
    const CVector y = V * (inverse.cast<Complex>().asDiagonal() * (V.adjoint() * c));
    const double residual = (gram * y - c).norm();
    result.worst_residual = std::max(result.worst_residual, residual);
  }
  return result;
}

double branch_zero_violation(const ConstructionTrace& trace, double radius, double tol) {
  if (trace.kind == ConstructionTrace::Kind::BaseCase) return 0.0;
  const int d = trace.dim;
  auto abs_sin = [](double y) {
    return std::abs(std::sin(std::numbers::pi * (y - std::round(y))));
  };
  double worst = 0.0;
  const PointCloud cyl = cylinder_basis(replay(trace.base_child())).window(radius);
  for (int i = 0; i < cyl.size(); ++i)
    worst = std::max(worst, abs_sin(cyl.points(d - 1, i)) - tol);
  FrequencySet previous = replay(trace.previous_child());
  if (trace.eta > 0.0) previous = push_from_integers(previous, trace.eta);
  const PointCloud prev = previous.window(radius);
  const double floor = std::sin(std::numbers::pi * trace.eta) - tol;
  for (int i = 0; i < prev.size(); ++i) {
    const double s = abs_sin(prev.points(d - 1, i));
    worst = std::max(worst, s <= tol ? 1.0 : floor - s);
  }
  return std::max(worst, 0.0);
}

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

template <typename F>
void guarded(CertificationReport& report, const std::string& name, F&& body) {
  try {
    body();
  } catch (const Error& e) {
    report.checks.push_back({name, Verdict::Fail,
                             std::string(to_string(e.kind())) + ": " + e.what()});
  } catch (const std::exception& e) {
    report.checks.push_back({name, Verdict::Fail, e.what()});
  }
}

} // namespace

CertificationReport certify(const Zonotope& omega, const FrequencySet& set,
                            const CertifyConfig& config, const ConstructionTrace* trace) {
  CertificationReport report;
  report.config = config;
  report.dim = omega.dim();
  report.volume = volume(omega);
  const auto& th = config.thresholds;
  const double r_max =
      config.radii.empty() ? 1.0 : *std::max_element(config.radii.begin(), config.radii.end());
  report.separation_radius = r_max;

  guarded(report, "dimension", [&] {
    if (set.dim() != omega.dim())
      throw Error(ErrorKind::DimensionMismatch, "frequency set and domain dimensions differ");
  });
  if (!report.checks.empty()) return report;

  guarded(report, "separation", [&] {
    report.separation = separation(set, r_max);
    const bool ok = report.separation >= th.separation_floor;
    report.checks.push_back({"separation", ok ? Verdict::Pass : Verdict::Flag,
                             "delta = " + fmt(report.separation) + " at R = " + fmt(r_max)});
  });

  guarded(report, "density", [&] {
    std::vector<double> radii = config.radii;
    radii.push_back(config.density_radius);
    for (double r : radii) {
      const PointCloud cloud = set.window(r);
      report.density.push_back(
          {r, cloud.size(), static_cast<double>(cloud.size()) / std::pow(2.0 * r, omega.dim())});
    }
    const double ratio = report.density.back().density / report.volume;
    const bool ok = std::abs(ratio - 1.0) <= th.density_tol;
    report.checks.push_back({"density", ok ? Verdict::Pass : Verdict::Flag,
                             "density/volume = " + fmt(ratio) + " at R = " +
                                 fmt(config.density_radius)});
  });

  bool spectra_ok = true;
  guarded(report, "spectra", [&] {
    spectra_ok = false;
    const IndicatorTransform transform(omega);
    for (double r : config.radii) {
      const GramSection g = gram_section(transform, set.window(r), config.threads);
      const RieszEstimates est = riesz_estimates(g);
      report.spectra.push_back({r, g.nodes.size(), est.sigma_min, est.sigma_max});
    }
    spectra_ok = true;
  });
  if (spectra_ok && !report.spectra.empty()) {
    double lowest = report.spectra.front().sigma_min;
    for (const auto& row : report.spectra) lowest = std::min(lowest, row.sigma_min);
    const double first = report.spectra.front().sigma_min;
    const double last = report.spectra.back().sigma_min;
    const bool lower_ok = lowest >= th.sigma_floor && last * th.degradation >= first;
    report.checks.push_back({"lower-riesz-bound", lower_ok ? Verdict::Pass : Verdict::Flag,
                             "sigma_min from " + fmt(first) + " to " + fmt(last)});
    double worst_growth = 1.0;
    for (const auto& row : report.spectra)
      worst_growth = std::max(worst_growth, row.sigma_max / report.spectra.front().sigma_max);
    const bool upper_ok = worst_growth <= th.growth_cap;
    report.checks.push_back({"bessel-bound", upper_ok ? Verdict::Pass : Verdict::Flag,
                             "sigma_max grows by " + fmt(worst_growth) + " over R = " +
                                 fmt(report.spectra.front().radius) + " (now " +
                                 fmt(report.spectra.back().sigma_max) + ")"});
  }

  guarded(report, "interpolation", [&] {
    const InterpolationResult r =
        interpolation_residual(omega, set, config.interpolation_radius, config.grid,
                               config.trials, config.seed, config.threads);
    report.interpolation.push_back({config.interpolation_radius, config.grid, config.trials,
                                    r.nodes, r.cells, r.worst_residual, r.condition});
    const bool ok = r.worst_residual <= th.interpolation_tol;
    report.checks.push_back({"interpolation", ok ? Verdict::Pass : Verdict::Flag,
                             "worst relative residual " + fmt(r.worst_residual) +
                                 " over " + std::to_string(config.trials) + " trials"});
  });

  if (trace) {
    guarded(report, "branch-structure", [&] {
      const double v = branch_zero_violation(*trace, r_max);
      report.checks.push_back({"branch-structure", v == 0.0 ? Verdict::Pass : Verdict::Flag,
                               "worst |sin(pi y)| violation " + fmt(v)});
    });
  }
  return report;
}

std::string render_text(const CertificationReport& r) {
  std::ostringstream os;
  os << "certification report (dim " << r.dim << ", volume " << fmt(r.volume) << ")\n";
  os << "all figures are evidence at the listed truncation radius R, not a proof\n";
  os << "separation: delta = " << fmt(r.separation) << " (evidence at truncation radius R = "
     << fmt(r.separation_radius) << ")\n";
  for (const auto& row : r.density)
    os << "density: R = " << fmt(row.radius) << "  count = " << row.count
       << "  density = " << fmt(row.density) << "  target = " << fmt(r.volume) << "\n";
  for (const auto& row : r.spectra)
    os << "spectrum: evidence at truncation radius R = " << fmt(row.radius) << "  nodes = "
       << row.nodes << "  sigma_min = " << fmt(row.sigma_min)
       << "  sigma_max = " << fmt(row.sigma_max) << "\n";
  for (const auto& row : r.interpolation)
    os << "interpolation: evidence at truncation radius R = " << fmt(row.radius)
       << "  N = " << row.grid << "  nodes = " << row.nodes << "  cells = " << row.cells
       << "  worst residual = " << fmt(row.worst_residual)
       << "  condition = " << fmt(row.condition) << "\n";
  for (const auto& c : r.checks)
    os << "[" << to_string(c.verdict) << "] " << c.name << ": " << c.detail << "\n";
  os << (r.all_pass() ? "verdict: PASS\n" : "verdict: FLAGGED\n");
  return os.str();
}

namespace {

std::string csv_num(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

} // namespace

std::string spectra_csv(const CertificationReport& r) {
  std::ostringstream os;
  os << "radius,nodes,sigma_min,sigma_max\n";
  for (const auto& row : r.spectra)
    os << csv_num(row.radius) << "," << row.nodes << "," << csv_num(row.sigma_min) << ","
       << csv_num(row.sigma_max) << "\n";
  return os.str();
}

std::string density_csv(const CertificationReport& r) {
  std::ostringstream os;
  os << "radius,count,density,volume\n";
  for (const auto& row : r.density)
    os << csv_num(row.radius) << "," << row.count << "," << csv_num(row.density) << ","
       << csv_num(r.volume) << "\n";
  return os.str();
}

std::string interpolation_csv(const CertificationReport& r) {
  std::ostringstream os;
  os << "radius,grid,trials,nodes,cells,worst_residual,condition\n";
  for (const auto& row : r.interpolation)
    os << csv_num(row.radius) << "," << row.grid << "," << row.trials << "," << row.nodes
       << "," << row.cells << "," << csv_num(row.worst_residual) << ","
       << csv_num(row.condition) << "\n";
  return os.str();
}

} // namespace zonobasis
