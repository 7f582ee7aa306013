#ifndef QKR_CONFIG_HPP
#define QKR_CONFIG_HPP

#include <string>

#include "qkr/scenarios.hpp"

namespace qkr {

/// Parses and validates a JSON experiment config. Unknown keys are rejected
/// with the offending key path; missing keys fall back to documented defaults.
ExperimentConfig parse_config(const std::string& path);

/// Same, from an in-memory JSON string.
ExperimentConfig parse_config_string(const std::string& text);

/// Canonical JSON echo of a config (used in manifests).
std::string config_to_json(const ExperimentConfig& config);

} // namespace qkr

#endif
