#include <doctest.h>

#include <algorithm>
#include <random>

#include "oracles.hpp"
#include "zonobasis/certify.hpp"
#include "zonobasis/construction.hpp"
#include "zonobasis/serialize.hpp"

using namespace zonobasis;

namespace {

Zonotope hexagon() {
  Matrix G(2, 3);
  G << 1, 1, 0, 0, 1, 1;
  return Zonotope(G);
}

// Frozen from one run of the default construction (eta = 0.2).
struct SpectrumBaseline {
  double radius, sigma_min, sigma_max;
};
constexpr SpectrumBaseline kHexagonSpectra[] = {
    {2.0, 0.11770827666077442, 2.0156955011206428},
    {4.0, 0.11719000471219845, 2.0163856477707784},
    {8.0, 0.11718966373644132, 2.0163861215607919},
};
constexpr double kHexagonInterpolation = 1.2038199922828417e-14;
constexpr double kControlInterpolation = 0.63859086767390261;

PointCloud cloud_of(std::initializer_list<std::pair<double, double>> pts) {
  PointCloud c;
  c.points.resize(2, static_cast<Eigen::Index>(pts.size()));
  Eigen::Index k = 0;
  for (auto [a, b] : pts) c.points.col(k++) = Vector{{a, b}};
  c.tags.assign(pts.size(), Branch::BaseLattice);
  return c;
}

Construction hexagon_set(EtaMode mode = EtaMode::Fixed) {
  ConstructionOptions o;
  o.eta.mode = mode;
  return construct(hexagon(), o);
}

} // namespace

TEST_CASE("separation") {
  CHECK(separation(cloud_of({{0, 0}, {0.3, 0.4}})) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(separation(parallelepiped_basis(Matrix::Identity(2, 2)), 5.0) == 1.0);
  CHECK_THROWS_AS(separation(cloud_of({{0, 0}})), Error);
  const Construction hex = hexagon_set();
  const double delta = separation(hex.frequencies, 8.0);
  CHECK(delta == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(delta == oracle::min_distance(hex.frequencies.window(8.0).points));
}

TEST_CASE("density") {
  CHECK(density(parallelepiped_basis(Matrix::Identity(2, 2)), 10.0) == doctest::Approx(1.1025));
  const FrequencySet half_by_one = parallelepiped_basis(Vector{{2.0, 1.0}}.asDiagonal().toDenseMatrix());
  CHECK(density(half_by_one, 10.0) == doctest::Approx(41.0 * 21.0 / 400.0));
  CHECK(std::abs(density(hexagon_set().frequencies, 50.0) / 3.0 - 1.0) < 0.05);
  CHECK_THROWS_AS(density(half_by_one, 0.5), Error);
}

TEST_CASE("Gram sections") {
  const Zonotope hex = hexagon();
  const IndicatorTransform ft(hex);
  const GramSection one = gram_section(ft, cloud_of({{0.3, -1.0}}));
  REQUIRE(one.matrix.rows() == 1);
  CHECK(std::abs(one.matrix(0, 0) - 3.0) <= 1e-12);

  const Zonotope square(Matrix::Identity(2, 2));
  const GramSection unit = gram_section(square, parallelepiped_basis(square.generators()), 3.0);
  CHECK((unit.matrix - CMatrix::Identity(49, 49)).cwiseAbs().maxCoeff() <= 1e-12);
  const RieszEstimates e = riesz_estimates(unit);
  CHECK(e.sigma_min == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(e.sigma_max == doctest::Approx(1.0).epsilon(1e-12));

  const GramSection g = gram_section(hex, hexagon_set().frequencies, 3.0);
  CHECK((g.matrix - g.matrix.adjoint()).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK((g.matrix.diagonal().array() - 3.0).abs().maxCoeff() <= 1e-10);
  CHECK(g.volume == doctest::Approx(3.0));
}

TEST_CASE("Gram entries match quadrature") {
  const Zonotope hex = hexagon();
  const GramSection g = gram_section(hex, hexagon_set().frequencies, 3.0);
  const auto hull = oracle::zonogon(hex.generators(), oracle::Vec2::Zero());
  std::mt19937_64 gen(10);
  std::uniform_int_distribution<int> pick(0, g.nodes.size() - 1);
  for (int t = 0; t < 20; ++t) {
    const int i = pick(gen), j = pick(gen);
    const Vector diff = g.nodes.point(j) - g.nodes.point(i);
    CHECK(std::abs(g.matrix(i, j) - oracle::polygon_ft(hull, diff, 512)) <= 1e-6);
  }
}

TEST_CASE("a duplicated point makes the section singular") {
  const Zonotope hex = hexagon();
  const GramSection g = gram_section(IndicatorTransform(hex), cloud_of({{0, 0}, {1, 0.5}, {0, 0}}));
  CHECK(std::abs(riesz_estimates(g).sigma_min) <= 1e-10);
}

TEST_CASE("hexagon spectra match the frozen baseline") {
  const Zonotope hex = hexagon();
  const Construction built = hexagon_set();
  for (const auto& b : kHexagonSpectra) {
    const RieszEstimates e = riesz_estimates(gram_section(hex, built.frequencies, b.radius));
    CHECK(e.sigma_min == doctest::Approx(b.sigma_min).epsilon(1e-9));
    CHECK(e.sigma_max == doctest::Approx(b.sigma_max).epsilon(1e-9));
    CHECK(e.sigma_max <= kHexagonSpectra[0].sigma_max * 1.05);
  }
}

TEST_CASE("extreme eigenvalues of nested sections are monotone") {
  const Zonotope hex = hexagon();
  const IndicatorTransform ft(hex);
  const PointCloud all = hexagon_set().frequencies.window(2.5);
  std::mt19937_64 gen(77);
  for (int trial = 0; trial < 3; ++trial) {
    std::vector<int> order(all.size());
    for (int i = 0; i < all.size(); ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), gen);
    double prev_min = INFINITY, prev_max = 0.0;
    for (int m = 1; m <= 40; ++m) {
      PointCloud part;
      part.points.resize(2, m);
      for (int k = 0; k < m; ++k) {
        part.points.col(k) = all.point(order[k]);
        part.tags.push_back(all.tags[order[k]]);
      }
      const RieszEstimates e = riesz_estimates(gram_section(ft, part));
      CHECK(e.sigma_min <= prev_min + 1e-12);
      CHECK(e.sigma_max >= prev_max - 1e-12);
      prev_min = e.sigma_min;
      prev_max = e.sigma_max;
    }
  }
}

TEST_CASE("sampling Gram matches an explicit sampling matrix") {
  const Zonotope hex = hexagon();
  const PointCloud nodes = hexagon_set().frequencies.window(1.5);
  const int n = 16;
  long cells = 0;
  const CMatrix fast = sampling_gram(hex, nodes, n, &cells);

  const double h = 2.0 / n;
  std::vector<oracle::Vec2> centers;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double x = -1 + (i + 0.5) * h, y = -1 + (j + 0.5) * h;
      if (y >= std::max(-1.0, x - 1.0) - 1e-9 && y <= std::min(1.0, x + 1.0) + 1e-9)
        centers.emplace_back(x, y);
    }
  CHECK(cells == static_cast<long>(centers.size()));
  CMatrix S(nodes.size(), static_cast<Eigen::Index>(centers.size()));
  for (int l = 0; l < nodes.size(); ++l)
    for (std::size_t c = 0; c < centers.size(); ++c)
      S(l, static_cast<Eigen::Index>(c)) =
          std::polar(h * h, -2.0 * oracle::pi * nodes.point(l).dot(centers[c]));
  const CMatrix slow = S * S.adjoint();
  CHECK((fast - slow).cwiseAbs().maxCoeff() <= 1e-12 * slow.cwiseAbs().maxCoeff());
}

TEST_CASE("interpolation residuals") {
  Matrix U(2, 2);
  U << 1.0, 0.4, -0.3, 0.8;
  const Zonotope para(U);
  const InterpolationResult lattice =
      interpolation_residual(para, parallelepiped_basis(U), 3.0, 128, 5, 3);
  CHECK(lattice.worst_residual <= 1e-8);

  const Zonotope hex = hexagon();
  const InterpolationResult good = interpolation_residual(hex, hexagon_set().frequencies, 4.0, 256, 10, 1);
  CHECK(good.nodes == 225);
  CHECK(good.rank == 225);
  CHECK(good.worst_residual <= 1e-12);
  CHECK(good.worst_residual <= 100 * kHexagonInterpolation);

  const InterpolationResult bad =
      interpolation_residual(hex, hexagon_set(EtaMode::Off).frequencies, 4.0, 256, 10, 1);
  CHECK(bad.worst_residual == doctest::Approx(kControlInterpolation).epsilon(1e-6));
  CHECK(bad.worst_residual >= 10 * good.worst_residual);
  CHECK(bad.rank < bad.nodes);
}

TEST_CASE("branch-zero structure") {
  const Construction good = hexagon_set();
  CHECK(branch_zero_violation(good.trace, 6.0) == 0.0);
  const Construction control = hexagon_set(EtaMode::Off);
  CHECK(branch_zero_violation(control.trace, 6.0) > 0.5);
  const PointCloud w = normalized_frequencies(good.trace).window(6.0);
  for (int i = 0; i < w.size(); ++i) {
    const double s = std::abs(std::sin(oracle::pi * w.points(1, i)));
    if (w.tags[i] == Branch::Cylinder) {
      CHECK(s <= 1e-12);
    } else {
      CHECK(s >= std::sin(oracle::pi * 0.2) - 1e-12);
    }
  }
  CHECK(branch_zero_violation(construct(Zonotope(Matrix::Identity(2, 2))).trace, 4.0) == 0.0);
}

TEST_CASE("certify verdicts") {
  CertifyConfig cfg;
  cfg.radii = {2.0, 4.0};
  cfg.grid = 128;
  cfg.trials = 3;

  Matrix U(2, 2);
  U << 1.0, 0.4, -0.3, 0.8;
  const Construction para = construct(Zonotope(U));
  const CertificationReport pr = certify(Zonotope(U), para.frequencies, cfg, &para.trace);
  CHECK(pr.all_pass());
  for (const auto& row : pr.spectra) {
    CHECK(row.sigma_min == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(row.sigma_max == doctest::Approx(1.0).epsilon(1e-9));
  }

  const Construction hex = hexagon_set();
  const CertificationReport hr = certify(hexagon(), hex.frequencies, cfg, &hex.trace);
  CHECK(hr.all_pass());
  CHECK(hr.checks.size() == 6);
  const std::string text = render_text(hr);
  CHECK(text.find("evidence at truncation radius") != std::string::npos);
  CHECK(text.find("verdict: PASS") != std::string::npos);

  const Construction control = hexagon_set(EtaMode::Off);
  const CertificationReport cr = certify(hexagon(), control.frequencies, cfg, &control.trace);
  CHECK_FALSE(cr.all_pass());
  const auto flagged = std::count_if(cr.checks.begin(), cr.checks.end(),
                                     [](const CheckResult& c) { return c.verdict == Verdict::Flag; });
  CHECK(flagged >= 3);
}

TEST_CASE("sub-errors become FAIL entries") {
  CertifyConfig cfg;
  cfg.radii = {1.0};
  cfg.density_radius = 1.0;
  cfg.grid = 32;
  cfg.trials = 1;
  const FrequencySet lonely = FrequencySet::from_points(cloud_of({{0, 0}}), 10.0);
  const CertificationReport r = certify(hexagon(), lonely, cfg);
  CHECK_FALSE(r.all_pass());
  const auto sep = std::find_if(r.checks.begin(), r.checks.end(),
                                [](const CheckResult& c) { return c.name == "separation"; });
  REQUIRE(sep != r.checks.end());
  CHECK(sep->verdict == Verdict::Fail);

  const FrequencySet three = parallelepiped_basis(Matrix::Identity(3, 3));
  const CertificationReport m = certify(hexagon(), three, cfg);
  REQUIRE(m.checks.size() == 1);
  CHECK(m.checks[0].verdict == Verdict::Fail);
}

TEST_CASE("reports round-trip and ignore the thread count") {
  CertifyConfig cfg;
  cfg.radii = {2.0, 4.0};
  cfg.grid = 64;
  cfg.trials = 2;
  const Construction hex = hexagon_set();
  const CertificationReport a = certify(hexagon(), hex.frequencies, cfg, &hex.trace);
  cfg.threads = 3;
  CertificationReport b = certify(hexagon(), hex.frequencies, cfg, &hex.trace);
  b.config.threads = 1;
  CHECK(a == b);
  CHECK(report_from_json(report_to_json(a)) == a);

  const Construction control = hexagon_set(EtaMode::Off);
  const CertificationReport c = certify(hexagon(), control.frequencies, cfg);
  CHECK(report_from_json(parse_json_text(dump(report_to_json(c)), "report")) == c);

  const std::string csv = spectra_csv(a);
  CHECK(csv.rfind("radius,nodes,sigma_min,sigma_max\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
  CHECK(density_csv(a).rfind("radius,", 0) == 0);
  CHECK(interpolation_csv(a).rfind("radius,", 0) == 0);
}
