/*
 * SPDX-License-Identifier: Apache-2.0
 * Copyright 2026 The eupf Authors
 */
#include "eupf/harness.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace eupf::harness {

std::string_view to_string(PolicyKind kind) { return kind == PolicyKind::kDqn ? "dqn" : "random"; }

PolicyKind parse_policy(std::string_view text) {
  if (text == "dqn") return PolicyKind::kDqn;
  if (text == "random") return PolicyKind::kRandom;
  throw ConfigError("unknown policy '" + std::string(text) + "' (expected dqn|random)");
}

agent::RewardNormalizer ExperimentConfig::normalizer() const {
  agent::RewardNormalizer n;
  n.rtt_floor_ms = rtt_floor_ms;
  if (rtt_ceiling_ms) {
    n.rtt_ceiling_ms = *rtt_ceiling_ms;
  } else {
    const double worst_a = env.path_a.base_delay_ms + env.path_a.bad_state_delay_ms;
    const double worst_b = env.path_b.base_delay_ms + env.path_b.bad_state_delay_ms;
    n.rtt_ceiling_ms = std::max(worst_a, worst_b) + env.max_jitter_ms;
  }
  return n;
}

void ExperimentConfig::validate() const {
  env.validate();
  if (episodes == 0) throw ConfigError("experiment.episodes must be >= 1");
  if (steps_per_episode == 0) throw ConfigError("experiment.steps_per_episode must be >= 1");
  if (policy == PolicyKind::kDqn) dqn.validate();
  const auto norm = normalizer();
  if (norm.rtt_ceiling_ms <= norm.rtt_floor_ms) {
    throw ConfigError("reward.rtt_ceiling_ms must exceed reward.rtt_floor_ms (a zero-delay environment needs an explicit ceiling)");
  }
  // Each echo must return before the next request of the same TEID, or the
  // request/response alternation in the round-trip map breaks.
  for (const auto* path : {&env.path_a, &env.path_b}) {
    if (path->base_delay_ms + path->bad_state_delay_ms + env.max_jitter_ms > env.step_ms) {
      throw ConfigError("worst-case path delay exceeds env.step_ms; echo pairs would overlap");
    }
  }
}

double EpisodeRecord::share(Interface iface) const {
  const auto total = action_counts[0] + action_counts[1];
  if (total == 0) return 0.0;
  return static_cast<double>(action_counts[index_of(iface)]) / static_cast<double>(total);
}

DescriptiveStats describe(std::span<const double> values) {
  if (values.empty()) throw InvalidArgument("cannot describe an empty sample");
  DescriptiveStats s;
  const double n = static_cast<double>(values.size());
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : values) ss += (v - s.mean) * (v - s.mean);
  s.standard_deviation = std::sqrt(ss / n);
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  s.min = sorted.front();
  s.max = sorted.back();
  const std::size_t mid = sorted.size() / 2;
  s.median = sorted.size() % 2 == 1 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
  return s;
}

std::vector<double> rolling_mean(std::span<const double> series, std::size_t window) {
  if (window == 0) throw InvalidArgument("rolling window must be >= 1");
  std::vector<double> out;
  out.reserve(series.size());
  double sum = 0.0;
  for (std::size_t j = 0; j < series.size(); ++j) {
    sum += series[j];
    if (j >= window) sum -= series[j - window];
    const std::size_t used = std::min(j + 1, window);
    out.push_back(sum / static_cast<double>(used));
  }
  return out;
}

TrailingSummary summarize_last(std::span<const EpisodeRecord> records, std::size_t n) {
  if (n == 0 || n > records.size()) {
    throw InvalidArgument("summary window of " + std::to_string(n) + " episodes over " +
                          std::to_string(records.size()) + " records");
  }
  std::vector<double> rewards, latency;
  for (const auto& r : records.subspan(records.size() - n)) {
    rewards.push_back(r.total_reward);
    latency.push_back(r.mean_rtt_ms);
  }
  return {n, describe(rewards), describe(latency)};
}

Experiment::Experiment(ExperimentConfig config) : config_(std::move(config)) {
  config_.validate();
  env::EnvConfig env_config = config_.env;
  env_config.seed = derive_seed(config_.seed, "env");
  env_ = std::make_unique<env::PathEnvironment>(env_config);
  maps_ = std::make_unique<dp::SharedMaps>();
  datapath_ = std::make_unique<dp::Datapath>(*maps_);
  session_ = std::make_unique<UeSession>(dp::Teid{config_.teid}, *datapath_, *env_);
  if (config_.policy == PolicyKind::kDqn) {
    agent_ = std::make_unique<agent::DqnAgent>(
        config_.dqn, config_.normalizer(),
        agent::DqnAgent::Streams{make_stream(config_.seed, "init"), make_stream(config_.seed, "exploration"),
                                 make_stream(config_.seed, "replay")});
  } else {
    agent_ = std::make_unique<agent::RandomAgent>(config_.normalizer(), make_stream(config_.seed, "exploration"));
  }
}

Experiment::~Experiment() = default;

const agent::DqnAgent* Experiment::dqn() const { return dynamic_cast<const agent::DqnAgent*>(agent_.get()); }

EpisodeRecord Experiment::run_episode() {
  const std::uint64_t episode = next_episode_;
  if (config_.reset_env_each_episode && episode > 0) env_->reset_conditions();
  agent_->begin_episode(episode);

  EpisodeRecord rec;
  rec.episode_index = episode;
  if (const auto* dqn_agent = dqn()) rec.target_fingerprint = dqn_agent->target().fingerprint();

  double rtt_sum = 0.0;
  for (std::uint64_t step = 0; step < config_.steps_per_episode; ++step) {
    const agent::StepResult res = agent_->step(*maps_, *session_);
    rec.total_reward += res.transition.reward;
    rtt_sum += res.rtt_ms;
    ++rec.action_counts[index_of(res.action)];
    if (config_.trace) rec.step_trace.push_back({step, res.action, res.rtt_ms, res.transition.reward});
  }
  rec.mean_rtt_ms = rtt_sum / static_cast<double>(config_.steps_per_episode);
  records_.push_back(rec);
  ++next_episode_;
  return rec;
}

void Experiment::run_all() {
  while (next_episode_ < config_.episodes) run_episode();
}

ExperimentResult Experiment::result() const {
  ExperimentResult out;
  out.config = config_;
  out.records = records_;
  out.packet_out = maps_->packet_out();
  if (!records_.empty()) out.summary = summarize_run(config_, records_, out.packet_out);
  if (const auto* dqn_agent = dqn()) {
    std::ostringstream ckpt;
    dqn_agent->save_checkpoint(ckpt);
    out.checkpoint = ckpt.str();
  }
  return out;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  Experiment experiment(config);
  experiment.run_all();
  return experiment.result();
}

RunSummary summarize_run(const ExperimentConfig& config, std::span<const EpisodeRecord> records,
                         const dp::PacketOutCounters& packet_out) {
  RunSummary s;
  const std::size_t n = records.size();
  const std::size_t last_n = std::min(kSummaryWindow, n);
  std::array<std::uint64_t, kInterfaceCount> counts{}, counts_last{};
  for (std::size_t i = 0; i < n; ++i) {
    s.mean_reward += records[i].total_reward;
    s.mean_rtt_ms += records[i].mean_rtt_ms;
    for (std::size_t k = 0; k < kInterfaceCount; ++k) {
      counts[k] += records[i].action_counts[k];
      if (i >= n - last_n) counts_last[k] += records[i].action_counts[k];
    }
    if (records[i].target_fingerprint && i > 0 && records[i - 1].target_fingerprint &&
        *records[i].target_fingerprint != *records[i - 1].target_fingerprint) {
      s.target_sync_episodes.push_back(records[i].episode_index);
    }
  }
  s.mean_reward /= static_cast<double>(n);
  s.mean_rtt_ms /= static_cast<double>(n);
  const auto total = static_cast<double>(counts[0] + counts[1]);
  const auto total_last = static_cast<double>(counts_last[0] + counts_last[1]);
  for (std::size_t k = 0; k < kInterfaceCount; ++k) {
    s.action_share[k] = total > 0 ? static_cast<double>(counts[k]) / total : 0.0;
    s.action_share_last[k] = total_last > 0 ? static_cast<double>(counts_last[k]) / total_last : 0.0;
  }
  s.last = summarize_last(records, last_n);

  // Packet k of the run (0-based) leaves at (k + 1) * step_ms.
  const double step_ms = config.env.step_ms;
  const auto first_last_packet = static_cast<double>((records[n - last_n].episode_index * config.steps_per_episode) + 1);
  dp::TimeWindow window;
  window.begin_ns = env::to_nanoseconds(first_last_packet * step_ms);
  window.end_ns = window.begin_ns +
                  env::to_nanoseconds(static_cast<double>(last_n * config.steps_per_episode) * step_ms);
  s.packet_out.all = dp::packet_out_histogram(packet_out, kPacketOutIntervalS);
  s.packet_out.last = dp::packet_out_histogram(packet_out, kPacketOutIntervalS, window);
  s.packet_out.last_episodes = last_n;
  return s;
}

ComparisonReport compare_runs(const RunView& a, const RunView& b, std::size_t last_n) {
  if (a.records.size() != b.records.size()) {
    throw InvalidArgument("runs differ in episode count (" + std::to_string(a.records.size()) + " vs " +
                          std::to_string(b.records.size()) + ")");
  }
  if (a.records.empty()) throw InvalidArgument("cannot compare empty runs");
  ComparisonReport rep;
  rep.label_a = a.label;
  rep.label_b = b.label;
  rep.episodes = a.records.size();
  last_n = std::min(last_n, rep.episodes);

  auto series = [](const RunView& run, auto getter) {
    std::vector<double> out;
    out.reserve(run.records.size());
    for (const auto& r : run.records) out.push_back(getter(r));
    return out;
  };
  auto mean = [](std::span<const double> v) { return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size()); };

  const auto rtt_a = series(a, [](const EpisodeRecord& r) { return r.mean_rtt_ms; });
  const auto rtt_b = series(b, [](const EpisodeRecord& r) { return r.mean_rtt_ms; });
  rep.mean_rtt_all = {mean(rtt_a), mean(rtt_b)};

  const auto last_a = summarize_last(a.records, last_n);
  const auto last_b = summarize_last(b.records, last_n);
  rep.mean_rtt_last = {last_a.latency_ms.mean, last_b.latency_ms.mean};
  rep.rtt_range_last = {last_a.latency_ms.range(), last_b.latency_ms.range()};
  rep.mean_reward_last = {last_a.reward.mean, last_b.reward.mean};

  rep.reward_rolling_a = rolling_mean(series(a, [](const EpisodeRecord& r) { return r.total_reward; }), kRollingWindow);
  rep.reward_rolling_b = rolling_mean(series(b, [](const EpisodeRecord& r) { return r.total_reward; }), kRollingWindow);
  rep.n6a_share_a = series(a, [](const EpisodeRecord& r) { return r.share(Interface::kN6a); });
  rep.n6a_share_b = series(b, [](const EpisodeRecord& r) { return r.share(Interface::kN6a); });
  return rep;
}

}  // namespace eupf::harness
