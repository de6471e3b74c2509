#pragma once

#include <string>

#include <json.hpp>

#include "zonobasis/certify.hpp"
#include "zonobasis/construction.hpp"
#include "zonobasis/frequency_set.hpp"
#include "zonobasis/zonotope.hpp"

namespace zonobasis {

/// Parse errors become ErrorKind::InvalidInput with "path:line:column: ...".
nlohmann::json parse_json_text(const std::string& text, const std::string& origin);
nlohmann::json parse_json_file(const std::string& path);
std::string read_text(const std::string& path);
void write_text(const std::string& path, const std::string& text);

nlohmann::json to_json(const Vector& v);
Vector vector_from_json(const nlohmann::json& j);
/// row-major nested arrays
nlohmann::json rows_to_json(const Matrix& m);
Matrix rows_from_json(const nlohmann::json& j);

/// {"dim": d, "center": [...], "generators": [[...], ...]}
nlohmann::json zonotope_to_json(const Zonotope& z);
Zonotope zonotope_from_json(const nlohmann::json& j);
Zonotope read_zonotope(const std::string& path);

/// {"dim": d, "window": R, "points": [[...], ...], "tags": [...]}
nlohmann::json frequency_file_json(const FrequencySet& set, double window);
FrequencySet frequency_set_from_json(const nlohmann::json& j);
FrequencySet read_frequency_file(const std::string& path);

nlohmann::json trace_to_json(const ConstructionTrace& trace);
ConstructionTrace trace_from_json(const nlohmann::json& j);

nlohmann::json certify_config_to_json(const CertifyConfig& c);
CertifyConfig certify_config_from_json(const nlohmann::json& j, CertifyConfig base = {});

nlohmann::json report_to_json(const CertificationReport& r);
CertificationReport report_from_json(const nlohmann::json& j);

/// Serialized text for files: two-space indented JSON plus newline.
std::string dump(const nlohmann::json& j);

} // namespace zonobasis
