#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "sinrcap/concentration.hpp"

namespace sinrcap {

// Version tag written into every config/report/manifest this library emits.
inline constexpr int kConfigSchemaVersion = 1;

// Serialize a full experiment configuration to the documented JSON layout:
// top-level sections "experiment", "sinr", "loss", "power", "scaling",
// "estimation" plus "schema_version".
nlohmann::json run_config_to_json(const ExperimentConfig& cfg);

// Parse a configuration.  Every field is optional and defaults to the value
// in a freshly constructed ExperimentConfig; unknown sections or keys are
// rejected with an error naming the offending key.  The returned config has
// NOT been validated — callers run cfg.validate() once overrides are applied.
ExperimentConfig run_config_from_json(const nlohmann::json& j);

// Read and parse a JSON config file.  Throws std::runtime_error with a
// message naming the path on I/O or parse failure.
nlohmann::json load_config_file(const std::string& path);

// Named built-in configurations.
std::vector<std::string> preset_names();
bool is_preset(const std::string& name);
nlohmann::json preset_config(const std::string& name);  // throws on unknown name
std::string preset_summary(const std::string& name);    // one-line description

// Apply one "section.key=value" override onto a config JSON object.  The
// value is parsed as JSON when possible (numbers, booleans) and treated as a
// bare string otherwise.  Throws std::runtime_error on malformed input.
void apply_override(nlohmann::json& j, const std::string& assignment);

}  // namespace sinrcap
