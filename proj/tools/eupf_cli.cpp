/*
 * SPDX-License-Identifier: Apache-2.0
 * Copyright 2026 The eupf Authors
 */
#include <CLI11.hpp>
#include <fmt/format.h>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "eupf/config.hpp"
#include "eupf/harness.hpp"
#include "eupf/report.hpp"

namespace {

using eupf::harness::ExperimentConfig;

struct RunOptions {
  std::optional<std::string> config_path;
  std::optional<std::string> policy;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> episodes;
  std::optional<std::string> out;
  std::optional<std::string> trigger_mode;
  bool trace = false;
};

ExperimentConfig resolve(const RunOptions& opts) {
  ExperimentConfig config;
  if (opts.config_path) config = eupf::harness::load_config(*opts.config_path);
  if (opts.policy) config.policy = eupf::harness::parse_policy(*opts.policy);
  if (opts.seed) config.seed = *opts.seed;
  if (opts.episodes) config.episodes = *opts.episodes;
  if (opts.out) config.output_dir = *opts.out;
  if (opts.trigger_mode) config.env.trigger_mode = eupf::env::parse_trigger_mode(*opts.trigger_mode);
  if (opts.trace) config.trace = true;
  config.validate();
  return config;
}

int run_command(const RunOptions& opts) {
  const ExperimentConfig config = resolve(opts);
  eupf::harness::Experiment experiment(config);
  try {
    experiment.run_all();
  } catch (...) {
    eupf::harness::write_partial(experiment.records(), config.output_dir);
    throw;
  }
  const auto result = experiment.result();
  eupf::harness::write_run(result, config.output_dir);

  const auto& s = result.summary;
  std::cout << fmt::format("{} seed={} episodes={} mean_rtt_ms={:.2f} mean_reward={:.2f} last{}_reward={:.2f} n6a_share_last={:.3f}\n",
                           eupf::harness::to_string(config.policy), config.seed, result.records.size(), s.mean_rtt_ms,
                           s.mean_reward, s.last.episodes, s.last.reward.mean, s.action_share_last[0]);
  std::cout << "wrote " << config.output_dir.string() << "\n";
  return 0;
}

int compare_command(const std::string& dir_a, const std::string& dir_b, const std::optional<std::string>& out) {
  const auto a = eupf::harness::load_run(dir_a);
  const auto b = eupf::harness::load_run(dir_b);
  const auto report = eupf::harness::compare_runs(a, b);
  const auto json = eupf::harness::comparison_json(report).dump(2);
  if (out) {
    std::filesystem::create_directories(*out);
    std::ofstream(std::filesystem::path(*out) / "comparison.json") << json << "\n";
    std::ofstream(std::filesystem::path(*out) / "comparison.csv") << eupf::harness::comparison_csv(report);
  }
  std::cout << json << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"eupf: DQN-driven N6 path selection simulator"};
  app.require_subcommand(1);

  RunOptions run_opts;
  auto* run = app.add_subcommand("run", "Run one experiment and write episodes.csv / summary.json");
  run->add_option("--config", run_opts.config_path, "Key-value config file");
  run->add_option("--policy", run_opts.policy, "dqn|random")->check(CLI::IsMember({"dqn", "random"}));
  run->add_option("--seed", run_opts.seed, "Root random seed");
  run->add_option("--episodes", run_opts.episodes, "Number of episodes");
  run->add_option("--out", run_opts.out, "Output directory");
  run->add_option("--trigger-mode", run_opts.trigger_mode, "traversal|per-step")
      ->check(CLI::IsMember({"traversal", "per-step"}));
  run->add_flag("--trace", run_opts.trace, "Also write per-step steps.csv");

  std::string dir_a, dir_b;
  std::optional<std::string> compare_out;
  auto* compare = app.add_subcommand("compare", "Compare two run directories side by side");
  compare->add_option("run_a", dir_a, "First run directory")->required();
  compare->add_option("run_b", dir_b, "Second run directory")->required();
  compare->add_option("--out", compare_out, "Also write comparison.json and comparison.csv here");

  RunOptions show_opts;
  auto* show = app.add_subcommand("config", "Print the effective configuration");
  show->add_option("--config", show_opts.config_path, "Key-value config file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return run_command(run_opts);
    if (*compare) return compare_command(dir_a, dir_b, compare_out);
    if (*show) {
      std::cout << eupf::harness::format_config(resolve(show_opts));
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "eupf: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
