#include "zonobasis/serialize.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace zonobasis {

using nlohmann::json;

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::InvalidInput, "cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::InvalidInput, "cannot write " + path);
  out << text;
}

json parse_json_text(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, column = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::ostringstream os;
    os << origin << ":" << line << ":" << column << ": JSON parse error";
    throw Error(ErrorKind::InvalidInput, os.str());
  }
}

json parse_json_file(const std::string& path) {
  return parse_json_text(read_text(path), path);
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

namespace {

json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

double number_from(const json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    throw Error(ErrorKind::InvalidInput, "expected a number, got '" + s + "'");
  }
  return j.get<double>();
}

template <typename F>
auto wrap_json(const char* what, F&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InvalidInput, std::string(what) + ": " + e.what());
  }
}

} // namespace

json to_json(const Vector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i) + 0.0); // no "-0.0" in files
  return a;
}

Vector vector_from_json(const json& j) {
  if (!j.is_array()) throw Error(ErrorKind::InvalidInput, "expected an array of numbers");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number())
      throw Error(ErrorKind::InvalidInput, "expected an array of numbers");
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

json rows_to_json(const Matrix& m) {
  json a = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) a.push_back(to_json(m.row(r).transpose()));
  return a;
}

Matrix rows_from_json(const json& j) {
  if (!j.is_array()) throw Error(ErrorKind::InvalidInput, "expected a nested array");
  if (j.empty()) return Matrix(0, 0);
  const Eigen::Index cols = static_cast<Eigen::Index>(j[0].size());
  Matrix m(static_cast<Eigen::Index>(j.size()), cols);
  for (std::size_t r = 0; r < j.size(); ++r) {
    const Vector row = vector_from_json(j[r]);
    if (row.size() != cols) throw Error(ErrorKind::InvalidInput, "ragged matrix rows");
    m.row(static_cast<Eigen::Index>(r)) = row.transpose();
  }
  return m;
}

json zonotope_to_json(const Zonotope& z) {
  json gens = json::array();
  for (int k = 0; k < z.count(); ++k) gens.push_back(to_json(z.generators().col(k)));
  return {{"dim", z.dim()}, {"center", to_json(z.center())}, {"generators", gens}};
}

Zonotope zonotope_from_json(const json& j) {
  return wrap_json("zonotope spec", [&] {
    if (!j.is_object()) throw Error(ErrorKind::InvalidInput, "zonotope spec must be an object");
    const int d = j.at("dim").get<int>();
    if (d < 1) throw Error(ErrorKind::InvalidInput, "zonotope 'dim' must be positive");
    Vector center = j.contains("center") ? vector_from_json(j.at("center")) : Vector::Zero(d);
    if (center.size() != d)
      throw Error(ErrorKind::DimensionMismatch, "center length differs from 'dim'");
    const json& gens = j.at("generators");
    if (!gens.is_array()) throw Error(ErrorKind::InvalidInput, "'generators' must be an array");
    Matrix G(d, static_cast<Eigen::Index>(gens.size()));
    for (std::size_t k = 0; k < gens.size(); ++k) {
      const Vector u = vector_from_json(gens[k]);
      if (u.size() != d)
        throw Error(ErrorKind::DimensionMismatch,
                    "generator " + std::to_string(k) + " length differs from 'dim'");
      G.col(static_cast<Eigen::Index>(k)) = u;
    }
    return Zonotope(std::move(G), std::move(center));
  });
}

Zonotope read_zonotope(const std::string& path) {
  return zonotope_from_json(parse_json_file(path));
}

json frequency_file_json(const FrequencySet& set, double window) {
  const PointCloud cloud = set.window(window);
  json points = json::array();
  json tags = json::array();
  for (int i = 0; i < cloud.size(); ++i) {
    points.push_back(to_json(cloud.points.col(i)));
    tags.push_back(to_string(cloud.tags[static_cast<std::size_t>(i)]));
  }
  return {{"dim", set.dim()}, {"window", window}, {"points", points}, {"tags", tags}};
}

FrequencySet frequency_set_from_json(const json& j) {
  return wrap_json("frequency file", [&] {
    const int d = j.at("dim").get<int>();
    const double window = j.at("window").get<double>();
    const json& points = j.at("points");
    const json& tags = j.at("tags");
    if (d < 1) throw Error(ErrorKind::InvalidInput, "frequency 'dim' must be positive");
    if (points.size() != tags.size())
      throw Error(ErrorKind::InvalidInput, "one tag per point required");
    PointCloud cloud;
    cloud.points.resize(d, static_cast<Eigen::Index>(points.size()));
    for (std::size_t i = 0; i < points.size(); ++i) {
      const Vector p = vector_from_json(points[i]);
      if (p.size() != d)
        throw Error(ErrorKind::DimensionMismatch, "point " + std::to_string(i) + " has wrong length");
      cloud.points.col(static_cast<Eigen::Index>(i)) = p;
      cloud.tags.push_back(branch_from_string(tags[i].get<std::string>()));
    }
    return FrequencySet::from_points(std::move(cloud), window);
  });
}

FrequencySet read_frequency_file(const std::string& path) {
  return frequency_set_from_json(parse_json_file(path));
}

json trace_to_json(const ConstructionTrace& t) {
  json j;
  j["kind"] = t.kind == ConstructionTrace::Kind::BaseCase ? "base-case" : "inductive-step";
  j["dim"] = t.dim;
  json gens = json::array();
  for (Eigen::Index k = 0; k < t.generators.cols(); ++k) gens.push_back(to_json(t.generators.col(k)));
  j["generators"] = gens;
  if (t.kind == ConstructionTrace::Kind::BaseCase) {
    j["dual_basis"] = rows_to_json(t.dual_basis);
    return j;
  }
  j["permutation"] = t.permutation;
  j["A"] = rows_to_json(t.A);
  j["A_inv_T"] = rows_to_json(t.A_inv_T);
  j["eta"] = t.eta;
  j["base"] = trace_to_json(t.base_child());
  j["previous"] = trace_to_json(t.previous_child());
  return j;
}

ConstructionTrace trace_from_json(const json& j) {
  return wrap_json("construction trace", [&] {
    ConstructionTrace t;
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "base-case") t.kind = ConstructionTrace::Kind::BaseCase;
    else if (kind == "inductive-step") t.kind = ConstructionTrace::Kind::InductiveStep;
    else throw Error(ErrorKind::InvalidInput, "unknown trace node kind '" + kind + "'");
    t.dim = j.at("dim").get<int>();
    const json& gens = j.at("generators");
    t.generators.resize(t.dim, static_cast<Eigen::Index>(gens.size()));
    for (std::size_t k = 0; k < gens.size(); ++k)
      t.generators.col(static_cast<Eigen::Index>(k)) = vector_from_json(gens[k]);
    if (t.kind == ConstructionTrace::Kind::BaseCase) {
      t.dual_basis = rows_from_json(j.at("dual_basis"));
      return t;
    }
    t.permutation = j.at("permutation").get<std::vector<int>>();
    t.A = rows_from_json(j.at("A"));
    t.A_inv_T = rows_from_json(j.at("A_inv_T"));
    t.eta = j.at("eta").get<double>();
    t.children.push_back(trace_from_json(j.at("base")));
    t.children.push_back(trace_from_json(j.at("previous")));
    return t;
  });
}

json certify_config_to_json(const CertifyConfig& c) {
  const auto& t = c.thresholds;
  return {{"radii", c.radii},
          {"density_radius", c.density_radius},
          {"interpolation_radius", c.interpolation_radius},
          {"grid", c.grid},
          {"trials", c.trials},
          {"seed", c.seed},
          {"threads", c.threads},
          {"thresholds",
           {{"separation_floor", t.separation_floor},
            {"density_tol", t.density_tol},
            {"sigma_floor", t.sigma_floor},
            {"degradation", t.degradation},
            {"growth_cap", t.growth_cap},
            {"interpolation_tol", t.interpolation_tol}}}};
}

CertifyConfig certify_config_from_json(const json& j, CertifyConfig c) {
  return wrap_json("certify config", [&] {
    if (j.contains("radii")) c.radii = j.at("radii").get<std::vector<double>>();
    if (j.contains("density_radius")) c.density_radius = j.at("density_radius").get<double>();
    if (j.contains("interpolation_radius"))
      c.interpolation_radius = j.at("interpolation_radius").get<double>();
    if (j.contains("grid")) c.grid = j.at("grid").get<int>();
    if (j.contains("trials")) c.trials = j.at("trials").get<int>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("threads")) c.threads = j.at("threads").get<int>();
    if (j.contains("thresholds")) {
      const json& t = j.at("thresholds");
      auto& th = c.thresholds;
      if (t.contains("separation_floor")) th.separation_floor = t.at("separation_floor").get<double>();
      if (t.contains("density_tol")) th.density_tol = t.at("density_tol").get<double>();
      if (t.contains("sigma_floor")) th.sigma_floor = t.at("sigma_floor").get<double>();
      if (t.contains("degradation")) th.degradation = t.at("degradation").get<double>();
      if (t.contains("growth_cap")) th.growth_cap = t.at("growth_cap").get<double>();
      if (t.contains("interpolation_tol")) th.interpolation_tol = t.at("interpolation_tol").get<double>();
    }
    return c;
  });
}

json report_to_json(const CertificationReport& r) {
  json density = json::array();
  for (const auto& row : r.density)
    density.push_back({{"radius", row.radius}, {"count", row.count}, {"density", number(row.density)}});
  json spectra = json::array();
  for (const auto& row : r.spectra)
    spectra.push_back({{"radius", row.radius},
                       {"nodes", row.nodes},
                       {"sigma_min", number(row.sigma_min)},
                       {"sigma_max", number(row.sigma_max)}});
  json interp = json::array();
  for (const auto& row : r.interpolation)
    interp.push_back({{"radius", row.radius},
                      {"grid", row.grid},
                      {"trials", row.trials},
                      {"nodes", row.nodes},
                      {"cells", row.cells},
                      {"worst_residual", number(row.worst_residual)},
                      {"condition", number(row.condition)}});
  json checks = json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"name", c.name}, {"verdict", to_string(c.verdict)}, {"detail", c.detail}});
  return {{"note", "numerical evidence at the listed truncation radii; not a proof"},
          {"dim", r.dim},
          {"volume", number(r.volume)},
          {"separation", {{"radius", r.separation_radius}, {"delta", number(r.separation)}}},
          {"density", density},
          {"spectra", spectra},
          {"interpolation", interp},
          {"checks", checks},
          {"verdict", r.all_pass() ? "PASS" : "FLAG"},
          {"config", certify_config_to_json(r.config)}};
}

CertificationReport report_from_json(const json& j) {
  return wrap_json("certification report", [&] {
    CertificationReport r;
    r.dim = j.at("dim").get<int>();
    r.volume = number_from(j.at("volume"));
    r.separation_radius = j.at("separation").at("radius").get<double>();
    r.separation = number_from(j.at("separation").at("delta"));
    for (const auto& row : j.at("density"))
      r.density.push_back({row.at("radius").get<double>(), row.at("count").get<long>(),
                           number_from(row.at("density"))});
    for (const auto& row : j.at("spectra"))
      r.spectra.push_back({row.at("radius").get<double>(), row.at("nodes").get<int>(),
                           number_from(row.at("sigma_min")), number_from(row.at("sigma_max"))});
    for (const auto& row : j.at("interpolation"))
      r.interpolation.push_back({row.at("radius").get<double>(), row.at("grid").get<int>(),
                                 row.at("trials").get<int>(), row.at("nodes").get<int>(),
                                 row.at("cells").get<long>(), number_from(row.at("worst_residual")),
                                 number_from(row.at("condition"))});
    for (const auto& c : j.at("checks"))
      r.checks.push_back({c.at("name").get<std::string>(),
                          verdict_from_string(c.at("verdict").get<std::string>()),
                          c.at("detail").get<std::string>()});
    r.config = certify_config_from_json(j.at("config"));
    return r;
  });
}

} // namespace zonobasis
