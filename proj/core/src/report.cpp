/*
 * SPDX-License-Identifier: Apache-2.0
 * Copyright 2026 The eupf Authors
 */
#include "eupf/report.hpp"

#include <fmt/format.h>

#include <fstream>
#include <sstream>

#include "eupf/config.hpp"

namespace eupf::harness {

namespace {

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << contents;
  if (!out) throw Error("short write to " + path.string());
}

nlohmann::ordered_json stats_json(const DescriptiveStats& s) {
  nlohmann::ordered_json j;
  j["mean"] = s.mean;
  j["sd"] = s.standard_deviation;
  j["median"] = s.median;
  j["min"] = s.min;
  j["max"] = s.max;
  return j;
}

nlohmann::ordered_json histogram_json(const dp::PacketOutHistogram& h) {
  nlohmann::ordered_json j;
  j["interval_s"] = h.interval_s;
  j["intervals"] = h.buckets.size();
  j["n6a_mean_per_interval"] = h.mean_per_interval[0];
  j["n6b_mean_per_interval"] = h.mean_per_interval[1];
  return j;
}

nlohmann::ordered_json side_json(const SideBySide& s) {
  nlohmann::ordered_json j;
  j["a"] = s.a;
  j["b"] = s.b;
  j["delta"] = s.delta();
  return j;
}

}  // namespace

std::string episodes_csv(std::span<const EpisodeRecord> records) {
  std::vector<double> rewards;
  rewards.reserve(records.size());
  for (const auto& r : records) rewards.push_back(r.total_reward);
  const auto rolling = rolling_mean(rewards, kRollingWindow);

  std::string out = std::string(kEpisodesHeader) + "\n";
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    out += fmt::format("{},{:.6f},{:.6f},{:.6f},{},{}\n", r.episode_index, r.total_reward, rolling[i], r.mean_rtt_ms,
                       r.action_counts[0], r.action_counts[1]);
  }
  return out;
}

std::string steps_csv(std::span<const EpisodeRecord> records) {
  std::string out;
  bool any = false;
  for (const auto& r : records) {
    for (const auto& s : r.step_trace) {
      if (!any) {
        out = std::string(kStepsHeader) + "\n";
        any = true;
      }
      out += fmt::format("{},{},{},{:.6f},{:.6f}\n", r.episode_index, s.step, to_string(s.action), s.rtt_ms, s.reward);
    }
  }
  return out;
}

nlohmann::ordered_json summary_json(const ExperimentResult& result) {
  const RunSummary& s = result.summary;
  nlohmann::ordered_json j;
  j["schema"] = {{"version", kCsvSchemaVersion},
                 {"episodes_csv", kEpisodesHeader},
                 {"steps_csv", kStepsHeader}};
  j["config"] = config_to_json(result.config);
  j["episodes_completed"] = result.records.size();
  j["all_episodes"] = {{"mean_reward", s.mean_reward},
                       {"mean_rtt_ms", s.mean_rtt_ms},
                       {"n6a_share", s.action_share[0]},
                       {"n6b_share", s.action_share[1]}};
  j["last_episodes"] = {{"count", s.last.episodes},
                        {"reward", stats_json(s.last.reward)},
                        {"latency_ms", stats_json(s.last.latency_ms)},
                        {"n6a_share", s.action_share_last[0]},
                        {"n6b_share", s.action_share_last[1]}};
  j["packet_out"] = {{"all", histogram_json(s.packet_out.all)},
                     {"last_episodes", histogram_json(s.packet_out.last)}};
  if (result.config.policy == PolicyKind::kDqn) j["target_sync_episodes"] = s.target_sync_episodes;
  return j;
}

void write_run(const ExperimentResult& result, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_file(dir / "episodes.csv", episodes_csv(result.records));
  if (result.config.trace) write_file(dir / "steps.csv", steps_csv(result.records));
  write_file(dir / "summary.json", summary_json(result).dump(2) + "\n");
  if (!result.checkpoint.empty()) write_file(dir / "agent.ckpt", result.checkpoint);
}

void write_partial(std::span<const EpisodeRecord> records, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_file(dir / "episodes.csv", episodes_csv(records));
  const std::string steps = steps_csv(records);
  if (!steps.empty()) write_file(dir / "steps.csv", steps);
}

std::vector<EpisodeRecord> read_episodes_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kEpisodesHeader) throw InvalidArgument("episodes.csv: unexpected header");
  std::vector<EpisodeRecord> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream row(line);
    EpisodeRecord r;
    double rolling = 0.0;
    char c1, c2, c3, c4, c5;
    if (!(row >> r.episode_index >> c1 >> r.total_reward >> c2 >> rolling >> c3 >> r.mean_rtt_ms >> c4 >>
          r.action_counts[0] >> c5 >> r.action_counts[1]) ||
        c1 != ',' || c2 != ',' || c3 != ',' || c4 != ',' || c5 != ',') {
      throw InvalidArgument(fmt::format("episodes.csv line {}: malformed row", line_no));
    }
    out.push_back(r);
  }
  return out;
}

RunView load_run(const std::filesystem::path& dir) {
  std::ifstream in(dir / "episodes.csv");
  if (!in) throw InvalidArgument("no episodes.csv in " + dir.string());
  RunView view;
  view.label = dir.filename().empty() ? dir.parent_path().filename().string() : dir.filename().string();
  view.records = read_episodes_csv(in);
  return view;
}

nlohmann::ordered_json comparison_json(const ComparisonReport& report) {
  nlohmann::ordered_json j;
  j["a"] = report.label_a;
  j["b"] = report.label_b;
  j["episodes"] = report.episodes;
  j["mean_rtt_ms_all"] = side_json(report.mean_rtt_all);
  j["mean_rtt_ms_last"] = side_json(report.mean_rtt_last);
  j["rtt_range_ms_last"] = side_json(report.rtt_range_last);
  j["mean_reward_last"] = side_json(report.mean_reward_last);
  return j;
}

std::string comparison_csv(const ComparisonReport& report) {
  std::string out = "episode,reward_rolling10_a,reward_rolling10_b,n6a_share_a,n6a_share_b\n";
  for (std::size_t i = 0; i < report.episodes; ++i) {
    out += fmt::format("{},{:.6f},{:.6f},{:.6f},{:.6f}\n", i, report.reward_rolling_a[i], report.reward_rolling_b[i],
                       report.n6a_share_a[i], report.n6a_share_b[i]);
  }
  return out;
}

}  // namespace eupf::harness
