/*
 * SPDX-License-Identifier: Apache-2.0
 * Copyright 2026 The eupf Authors
 */
#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "eupf/datapath.hpp"
#include "eupf/path_env.hpp"
#include "eupf/policy.hpp"

namespace eupf::harness {

enum class PolicyKind : std::uint8_t { kDqn, kRandom };

std::string_view to_string(PolicyKind kind);
PolicyKind parse_policy(std::string_view text);

struct ExperimentConfig {
  env::EnvConfig env{};
  agent::DqnSettings dqn{};
  /// Unset means "derive from the environment": max(base + bad delay) + jitter.
  std::optional<double> rtt_ceiling_ms;
  double rtt_floor_ms = 0.0;
  std::uint64_t episodes = 400;
  std::uint64_t steps_per_episode = 60;
  PolicyKind policy = PolicyKind::kDqn;
  std::uint64_t seed = 1;
  std::filesystem::path output_dir = "out";
  bool trace = false;
  bool reset_env_each_episode = false;
  std::uint32_t teid = 1;

  agent::RewardNormalizer normalizer() const;
  /// Throws ConfigError with the offending key.
  void validate() const;
};

struct StepTrace {
  std::uint64_t step = 0;
  Interface action = Interface::kN6a;
  double rtt_ms = 0.0;
  double reward = 0.0;
};

struct EpisodeRecord {
  std::uint64_t episode_index = 0;
  double total_reward = 0.0;
  double mean_rtt_ms = 0.0;
  std::array<std::uint64_t, kInterfaceCount> action_counts{};
  std::vector<StepTrace> step_trace;               // filled when tracing
  std::optional<std::uint64_t> target_fingerprint;  // DQN only, at episode start

  double share(Interface iface) const;
};

struct DescriptiveStats {
  double mean = 0.0;
  double standard_deviation = 0.0;  // population
  double median = 0.0;
  double min = 0.0;
  double max = 0.0;

  double range() const { return max - min; }
};

/// Rejects an empty sample.
DescriptiveStats describe(std::span<const double> values);

/// Trailing-window mean; the first window-1 entries average the prefix seen
/// so far.
std::vector<double> rolling_mean(std::span<const double> series, std::size_t window = 10);

struct TrailingSummary {
  std::size_t episodes = 0;
  DescriptiveStats reward;
  DescriptiveStats latency_ms;  // per-episode mean RTT
};

/// Statistics over the last `n` records. Throws InvalidArgument if n is 0 or
/// exceeds the record count.
TrailingSummary summarize_last(std::span<const EpisodeRecord> records, std::size_t n = 50);

struct PacketOutSummary {
  dp::PacketOutHistogram all;
  dp::PacketOutHistogram last;  // trailing window of `last_episodes`
  std::size_t last_episodes = 0;
};

struct RunSummary {
  double mean_reward = 0.0;
  double mean_rtt_ms = 0.0;
  std::array<double, kInterfaceCount> action_share{};
  std::array<double, kInterfaceCount> action_share_last{};
  TrailingSummary last;
  PacketOutSummary packet_out;
  std::vector<std::uint64_t> target_sync_episodes;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<EpisodeRecord> records;
  dp::PacketOutCounters packet_out;
  RunSummary summary;
  std::string checkpoint;  // agent checkpoint text, DQN only
};

inline constexpr std::size_t kSummaryWindow = 50;
inline constexpr std::size_t kRollingWindow = 10;
inline constexpr double kPacketOutIntervalS = 10.0;

/// Owns one run's environment, datapath maps and agent. Episodes execute in
/// order; the environment carries over between episodes unless configured
/// to reset.
class Experiment {
 public:
  explicit Experiment(ExperimentConfig config);
  ~Experiment();

  EpisodeRecord run_episode();
  void run_all();
  ExperimentResult result() const;

  const std::vector<EpisodeRecord>& records() const { return records_; }
  const ExperimentConfig& config() const { return config_; }
  const dp::SharedMaps& maps() const { return *maps_; }
  const env::PathEnvironment& environment() const { return *env_; }
  /// Null for the random baseline.
  const agent::DqnAgent* dqn() const;

 private:
  ExperimentConfig config_;
  std::unique_ptr<env::PathEnvironment> env_;
  std::unique_ptr<dp::SharedMaps> maps_;
  std::unique_ptr<dp::Datapath> datapath_;
  std::unique_ptr<UeSession> session_;
  std::unique_ptr<agent::Agent> agent_;
  std::vector<EpisodeRecord> records_;
  std::uint64_t next_episode_ = 0;
};

/// Runs every episode; fully determined by the config and its seed.
ExperimentResult run_experiment(const ExperimentConfig& config);

RunSummary summarize_run(const ExperimentConfig& config, std::span<const EpisodeRecord> records,
                         const dp::PacketOutCounters& packet_out);

struct RunView {
  std::string label;
  std::vector<EpisodeRecord> records;
};

struct SideBySide {
  double a = 0.0;
  double b = 0.0;
  double delta() const { return b - a; }
};

struct ComparisonReport {
  std::string label_a;
  std::string label_b;
  std::size_t episodes = 0;
  SideBySide mean_rtt_all;
  SideBySide mean_rtt_last;
  SideBySide rtt_range_last;
  SideBySide mean_reward_last;
  std::vector<double> reward_rolling_a, reward_rolling_b;
  std::vector<double> n6a_share_a, n6a_share_b;
};

/// Side-by-side metrics for two runs of equal length.
ComparisonReport compare_runs(const RunView& a, const RunView& b, std::size_t last_n = kSummaryWindow);

}  // namespace eupf::harness
