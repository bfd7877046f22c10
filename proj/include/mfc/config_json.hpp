#pragma once

#include "mfc/scenario.hpp"

#include <json.hpp>

#include <string>

namespace mfc {

/// Parses a JSON config document into a validated ScenarioConfig.
///
/// Two top-level shapes are accepted:
///   {"scenario": "<builtin name>", ...overrides}    builtin lookup, with
///       optional "controller" (kind string or full object), "ts",
///       "horizon", "actuator_limit" overrides
///   {"bank": [...], "schedule": {...}, "reference": {...},
///    "controller": {...}, "ts": ..., "horizon": ...}    full custom config
///
/// Parsing is strict: unknown keys anywhere raise ConfigError naming the key.
ScenarioConfig parse_config(const std::string& text);

/// Serializes the fully resolved config back to its JSON document form.
/// parse_config(serialize_config(c).dump()) reproduces c value-for-value.
nlohmann::json serialize_config(const ScenarioConfig& config);

/// Stable content hash (FNV-1a over the canonical serialized form), hex.
std::string scenario_digest(const ScenarioConfig& config);

} // namespace mfc
