#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "mrcl/sim.hpp"

namespace mrcl {

/// Parse or semantic failure; the message lists every violation with its key
/// path, not just the first.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Reads, validates and materializes a scenario. Throws ConfigError.
ScenarioConfig load_config(const std::filesystem::path& path);

/// Builds a scenario from parsed JSON, checking every module invariant.
ScenarioConfig scenario_from_json(const nlohmann::json& j);

/// Applies a `key=value` override using dotted paths (e.g. trigger.rho=3.5,
/// zones.0.radius=0.4). The key must already exist. Throws ConfigError.
void apply_override(nlohmann::json& j, const std::string& key_value);

nlohmann::json parse_config_file(const std::filesystem::path& path);

}  // namespace mrcl
