/*
 * SPDX-License-Identifier: Apache-2.0
 * Copyright 2026 The eupf Authors
 */
#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "eupf/harness.hpp"

namespace eupf::harness {

inline constexpr int kCsvSchemaVersion = 1;
inline constexpr char kEpisodesHeader[] = "episode,total_reward,reward_rolling10,mean_rtt_ms,actions_n6a,actions_n6b";
inline constexpr char kStepsHeader[] = "episode,step,action,rtt_ms,reward";

std::string episodes_csv(std::span<const EpisodeRecord> records);
/// Empty unless the records carry step traces.
std::string steps_csv(std::span<const EpisodeRecord> records);
nlohmann::ordered_json summary_json(const ExperimentResult& result);

/// Writes episodes.csv, summary.json, steps.csv when traced and, for DQN,
/// agent.ckpt into `dir` (created if missing).
void write_run(const ExperimentResult& result, const std::filesystem::path& dir);

/// Writes whatever episodes completed before a failure.
void write_partial(std::span<const EpisodeRecord> records, const std::filesystem::path& dir);

std::vector<EpisodeRecord> read_episodes_csv(std::istream& in);
RunView load_run(const std::filesystem::path& dir);

nlohmann::ordered_json comparison_json(const ComparisonReport& report);
/// episode, reward_rolling10_a, reward_rolling10_b, n6a_share_a, n6a_share_b
std::string comparison_csv(const ComparisonReport& report);

}  // namespace eupf::harness
