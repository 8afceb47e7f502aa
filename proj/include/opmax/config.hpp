#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <json.hpp>

#include "opmax/engine.hpp"

namespace opmax {

// JSON mirror of SimConfig. Missing keys keep the value from `base`; unknown
// keys are rejected.
SimConfig config_from_json(const nlohmann::json& j, const SimConfig& base = SimConfig{});
nlohmann::json config_to_json(const SimConfig& cfg);
SimConfig load_config_file(const std::string& path, const SimConfig& base = SimConfig{});

// Experiment defaults for "pa1k", "pa10k" and "fb-ego".
SimConfig preset(std::string_view name);

// FNV-1a of the canonical JSON serialization, as 16 hex digits.
std::string config_hash(const SimConfig& cfg);

std::uint64_t fnv1a(std::string_view bytes);

}  // namespace opmax
