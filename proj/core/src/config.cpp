/*
 * SPDX-License-Identifier: Apache-2.0
 * Copyright 2026 The eupf Authors
 */
#include "eupf/config.hpp"

#include <fmt/format.h>

#include <charconv>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <vector>

namespace eupf::harness {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double to_double(std::string_view v) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) throw ConfigError("expected a number, got '" + std::string(v) + "'");
  return out;
}

std::uint64_t to_uint(std::string_view v) {
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) {
    throw ConfigError("expected a non-negative integer, got '" + std::string(v) + "'");
  }
  return out;
}

bool to_bool(std::string_view v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("expected true/false, got '" + std::string(v) + "'");
}

std::string num(double v) { return fmt::format("{}", v); }

struct Key {
  std::string_view name;
  std::function<void(ExperimentConfig&, std::string_view)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

template <typename Member>
Key path_key(std::string_view name, env::PathParams env::EnvConfig::*path, Member env::PathParams::*field) {
  return {name, [=](ExperimentConfig& c, std::string_view v) { c.env.*path.*field = to_double(v); },
          [=](const ExperimentConfig& c) { return num(c.env.*path.*field); }};
}

const std::vector<Key>& keys() {
  using env::EnvConfig;
  using env::PathParams;
  static const std::vector<Key> table = {
      path_key("env.path_a.failure_probability", &EnvConfig::path_a, &PathParams::failure_probability),
      path_key("env.path_a.failure_duration_ms", &EnvConfig::path_a, &PathParams::failure_duration_ms),
      path_key("env.path_a.bad_state_delay_ms", &EnvConfig::path_a, &PathParams::bad_state_delay_ms),
      path_key("env.path_a.base_delay_ms", &EnvConfig::path_a, &PathParams::base_delay_ms),
      path_key("env.path_b.failure_probability", &EnvConfig::path_b, &PathParams::failure_probability),
      path_key("env.path_b.failure_duration_ms", &EnvConfig::path_b, &PathParams::failure_duration_ms),
      path_key("env.path_b.bad_state_delay_ms", &EnvConfig::path_b, &PathParams::bad_state_delay_ms),
      path_key("env.path_b.base_delay_ms", &EnvConfig::path_b, &PathParams::base_delay_ms),
      {"env.max_jitter_ms", [](ExperimentConfig& c, std::string_view v) { c.env.max_jitter_ms = to_double(v); },
       [](const ExperimentConfig& c) { return num(c.env.max_jitter_ms); }},
      {"env.trigger_mode",
       [](ExperimentConfig& c, std::string_view v) { c.env.trigger_mode = env::parse_trigger_mode(v); },
       [](const ExperimentConfig& c) { return std::string(env::to_string(c.env.trigger_mode)); }},
      {"env.step_ms", [](ExperimentConfig& c, std::string_view v) { c.env.step_ms = to_double(v); },
       [](const ExperimentConfig& c) { return num(c.env.step_ms); }},
      {"env.reset_each_episode",
       [](ExperimentConfig& c, std::string_view v) { c.reset_env_each_episode = to_bool(v); },
       [](const ExperimentConfig& c) { return std::string(c.reset_env_each_episode ? "true" : "false"); }},

      {"experiment.episodes", [](ExperimentConfig& c, std::string_view v) { c.episodes = to_uint(v); },
       [](const ExperimentConfig& c) { return std::to_string(c.episodes); }},
      {"experiment.steps_per_episode",
       [](ExperimentConfig& c, std::string_view v) { c.steps_per_episode = to_uint(v); },
       [](const ExperimentConfig& c) { return std::to_string(c.steps_per_episode); }},
      {"experiment.policy", [](ExperimentConfig& c, std::string_view v) { c.policy = parse_policy(v); },
       [](const ExperimentConfig& c) { return std::string(to_string(c.policy)); }},
      {"experiment.seed", [](ExperimentConfig& c, std::string_view v) { c.seed = to_uint(v); },
       [](const ExperimentConfig& c) { return std::to_string(c.seed); }},
      {"experiment.output_dir", [](ExperimentConfig& c, std::string_view v) { c.output_dir = std::string(v); },
       [](const ExperimentConfig& c) { return c.output_dir.string(); }},
      {"experiment.trace", [](ExperimentConfig& c, std::string_view v) { c.trace = to_bool(v); },
       [](const ExperimentConfig& c) { return std::string(c.trace ? "true" : "false"); }},
      {"experiment.teid",
       [](ExperimentConfig& c, std::string_view v) {
         const auto t = to_uint(v);
         if (t > 0xffffffffULL) throw ConfigError("experiment.teid must fit in 32 bits");
         c.teid = static_cast<std::uint32_t>(t);
       },
       [](const ExperimentConfig& c) { return std::to_string(c.teid); }},

      {"dqn.gamma", [](ExperimentConfig& c, std::string_view v) { c.dqn.gamma = to_double(v); },
       [](const ExperimentConfig& c) { return num(c.dqn.gamma); }},
      {"dqn.learning_rate", [](ExperimentConfig& c, std::string_view v) { c.dqn.learning_rate = to_double(v); },
       [](const ExperimentConfig& c) { return num(c.dqn.learning_rate); }},
      {"dqn.batch_size", [](ExperimentConfig& c, std::string_view v) { c.dqn.batch_size = to_uint(v); },
       [](const ExperimentConfig& c) { return std::to_string(c.dqn.batch_size); }},
      {"dqn.replay_capacity", [](ExperimentConfig& c, std::string_view v) { c.dqn.replay_capacity = to_uint(v); },
       [](const ExperimentConfig& c) { return std::to_string(c.dqn.replay_capacity); }},
      {"dqn.epsilon_start",
       [](ExperimentConfig& c, std::string_view v) { c.dqn.exploration.eps_start = to_double(v); },
       [](const ExperimentConfig& c) { return num(c.dqn.exploration.eps_start); }},
      {"dqn.epsilon_end", [](ExperimentConfig& c, std::string_view v) { c.dqn.exploration.eps_end = to_double(v); },
       [](const ExperimentConfig& c) { return num(c.dqn.exploration.eps_end); }},
      {"dqn.epsilon_decay", [](ExperimentConfig& c, std::string_view v) { c.dqn.exploration.decay = to_double(v); },
       [](const ExperimentConfig& c) { return num(c.dqn.exploration.decay); }},
      {"dqn.target_update_episodes",
       [](ExperimentConfig& c, std::string_view v) { c.dqn.target_update_episodes = to_uint(v); },
       [](const ExperimentConfig& c) { return std::to_string(c.dqn.target_update_episodes); }},
      {"dqn.hidden_units", [](ExperimentConfig& c, std::string_view v) { c.dqn.hidden_units = to_uint(v); },
       [](const ExperimentConfig& c) { return std::to_string(c.dqn.hidden_units); }},

      {"reward.rtt_floor_ms", [](ExperimentConfig& c, std::string_view v) { c.rtt_floor_ms = to_double(v); },
       [](const ExperimentConfig& c) { return num(c.rtt_floor_ms); }},
      {"reward.rtt_ceiling_ms",
       [](ExperimentConfig& c, std::string_view v) {
         if (v == "auto") {
           c.rtt_ceiling_ms.reset();
         } else {
           c.rtt_ceiling_ms = to_double(v);
         }
       },
       [](const ExperimentConfig& c) { return c.rtt_ceiling_ms ? num(*c.rtt_ceiling_ms) : std::string("auto"); }},
  };
  return table;
}

const Key* find_key(std::string_view name) {
  for (const auto& k : keys()) {
    if (k.name == name) return &k;
  }
  return nullptr;
}

}  // namespace

ExperimentConfig parse_config(std::string_view text, ExperimentConfig base) {
  std::string section;
  std::set<std::string> seen;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find_first_of("#;"); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    auto fail = [&](const std::string& why) {
      return ConfigError(fmt::format("config line {}: {}", line_no, why));
    };
    if (line.front() == '[') {
      if (line.back() != ']') throw fail("unterminated section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw fail("expected key = value");
    const std::string_view key_part = trim(line.substr(0, eq));
    std::string_view value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);

    const std::string key = section.empty() ? std::string(key_part) : section + "." + std::string(key_part);
    const Key* k = find_key(key);
    if (k == nullptr) throw fail("unknown key '" + key + "'");
    if (!seen.insert(key).second) throw fail("duplicate key '" + key + "'");
    try {
      k->set(base, value);
    } catch (const ConfigError& e) {
      throw fail(key + ": " + e.what());
    }
  }
  return base;
}

ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), std::move(base));
}

std::string format_config(const ExperimentConfig& config) {
  std::string out;
  for (const auto& k : keys()) out += fmt::format("{} = {}\n", k.name, k.get(config));
  return out;
}

nlohmann::ordered_json config_to_json(const ExperimentConfig& config) {
  nlohmann::ordered_json j;
  for (const auto& k : keys()) {
    // Where the run was written is not part of what was run.
    if (k.name == "experiment.output_dir") continue;
    j[std::string(k.name)] = k.get(config);
  }
  return j;
}

}  // namespace eupf::harness
