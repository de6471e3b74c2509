#pragma once

#include <optional>
#include <string>

#include "zonobasis/certify.hpp"
#include "zonobasis/construction.hpp"
#include "zonobasis/serialize.hpp"

namespace zonobasis {

/// Settings shared by the command-line tools. Every field has a default;
/// a JSON config file overrides them and command-line flags override both.
struct Config {
  EtaConfig eta;
  CertifyConfig certify;
  GeometryTolerances tol;
  /// radius of the window written to frequency files; 0 picks the largest
  /// radius any check needs
  double window = 0.0;
  std::string out_dir = ".";

  double effective_window() const;
  ConstructionOptions construction_options() const;
};

/// Environment variable naming a default config file.
inline constexpr const char* kConfigEnv = "ZONOBASIS_CONFIG";

Config config_from_json(const nlohmann::json& j, Config base = {});
nlohmann::json config_to_json(const Config& c);
Config load_config(const std::string& path, Config base = {});

/// Throws InvalidInput naming the first out-of-range field.
void validate(const Config& c);

} // namespace zonobasis
