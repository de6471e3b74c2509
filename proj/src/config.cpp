#include "zonobasis/config.hpp"

#include <algorithm>

namespace zonobasis {

using nlohmann::json;

double Config::effective_window() const {
  if (window > 0.0) return window;
  double w = certify.density_radius;
  w = std::max(w, certify.interpolation_radius);
  for (double r : certify.radii) w = std::max(w, r);
  return w;
}

ConstructionOptions Config::construction_options() const {
  ConstructionOptions o;
  o.eta = eta;
  o.tol = tol;
  o.threads = certify.threads;
  return o;
}

Config config_from_json(const json& j, Config c) {
  try {
    if (!j.is_object()) throw Error(ErrorKind::InvalidInput, "config must be a JSON object");
    if (j.contains("eta")) {
      const json& e = j.at("eta");
      if (e.is_number()) {
        c.eta.eta = e.get<double>();
      } else {
        if (e.contains("mode")) c.eta.mode = eta_mode_from_string(e.at("mode").get<std::string>());
        if (e.contains("value")) c.eta.eta = e.at("value").get<double>();
        if (e.contains("kappa")) c.eta.kappa = e.at("kappa").get<double>();
        if (e.contains("max_halvings")) c.eta.max_halvings = e.at("max_halvings").get<int>();
        if (e.contains("probe_radius")) c.eta.probe_radius = e.at("probe_radius").get<double>();
      }
    }
    c.certify = certify_config_from_json(j, c.certify);
    if (j.contains("tolerances")) {
      const json& t = j.at("tolerances");
      if (t.contains("lp")) c.tol.lp = t.at("lp").get<double>();
      if (t.contains("collinear")) c.tol.collinear = t.at("collinear").get<double>();
      if (t.contains("singular")) c.tol.singular = t.at("singular").get<double>();
    }
    if (j.contains("window")) c.window = j.at("window").get<double>();
    if (j.contains("out")) c.out_dir = j.at("out").get<std::string>();
    return c;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InvalidInput, std::string("config: ") + e.what());
  }
}

json config_to_json(const Config& c) {
  json j = certify_config_to_json(c.certify);
  j["eta"] = {{"mode", to_string(c.eta.mode)},
              {"value", c.eta.eta},
              {"kappa", c.eta.kappa},
              {"max_halvings", c.eta.max_halvings},
              {"probe_radius", c.eta.probe_radius}};
  j["tolerances"] = {{"lp", c.tol.lp}, {"collinear", c.tol.collinear}, {"singular", c.tol.singular}};
  j["window"] = c.effective_window();
  return j;
}

Config load_config(const std::string& path, Config base) {
  return config_from_json(parse_json_file(path), std::move(base));
}

void validate(const Config& c) {
  auto fail = [](const std::string& what) { throw Error(ErrorKind::InvalidInput, "config: " + what); };
  if (c.eta.mode != EtaMode::Off && !(c.eta.eta > 0.0 && c.eta.eta <= 0.5))
    fail("eta must lie in (0, 1/2]");
  if (!(c.eta.kappa >= 1.0)) fail("eta.kappa must be >= 1");
  if (c.eta.max_halvings < 0) fail("eta.max_halvings must be >= 0");
  if (!(c.eta.probe_radius > 0.0)) fail("eta.probe_radius must be positive");
  const auto& k = c.certify;
  if (k.radii.empty()) fail("at least one radius is required");
  for (std::size_t i = 0; i < k.radii.size(); ++i) {
    if (!(k.radii[i] > 0.0)) fail("radii must be positive");
    if (i > 0 && !(k.radii[i] > k.radii[i - 1])) fail("radii must be strictly increasing");
  }
  if (!(k.density_radius >= 1.0)) fail("density_radius must be >= 1");
  if (!(k.interpolation_radius > 0.0)) fail("interpolation_radius must be positive");
  if (k.grid < 1 || (k.grid & (k.grid - 1)) != 0) fail("grid must be a power of two");
  if (k.trials < 1) fail("trials must be >= 1");
  if (k.threads < 1) fail("threads must be >= 1");
  if (c.window < 0.0) fail("window must be >= 0");
  if (!(c.tol.lp > 0.0) || !(c.tol.collinear > 0.0) || !(c.tol.singular > 0.0))
    fail("tolerances must be positive");
}

} // namespace zonobasis
