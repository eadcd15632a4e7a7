/*
 * SPDX-License-Identifier: Apache-2.0
 * Copyright 2026 The eupf Authors
 */
#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "eupf/harness.hpp"

namespace eupf::harness {

/// Parses flat `key = value` text on top of `base`.
///
///   # comment
///   env.path_a.failure_probability = 0.01
///   [dqn]
///   gamma = 0.99          # same as dqn.gamma
///
/// A `[section]` header prefixes the keys that follow it. Unknown keys,
/// repeated keys and unparsable values raise ConfigError naming the line.
ExperimentConfig parse_config(std::string_view text, ExperimentConfig base = {});

ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base = {});

/// Every key with its effective value, in file order.
std::string format_config(const ExperimentConfig& config);

/// Config echo for summaries. Leaves out the output directory so runs
/// written to different places stay byte-comparable.
nlohmann::ordered_json config_to_json(const ExperimentConfig& config);

}  // namespace eupf::harness
