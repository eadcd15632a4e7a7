/*
 * SPDX-License-Identifier: Apache-2.0
 * Copyright 2026 The eupf Authors
 */
#include "eupf/path_env.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace eupf::env {

namespace {

bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }

}  // namespace

void PathParams::validate(std::string_view name) const {
  const std::string prefix(name);
  if (!(failure_probability >= 0.0 && failure_probability <= 1.0)) {
    throw ConfigError(prefix + ".failure_probability must lie in [0, 1]");
  }
  if (!(std::isfinite(failure_duration_ms) && failure_duration_ms > 0.0)) {
    throw ConfigError(prefix + ".failure_duration_ms must be > 0");
  }
  if (!finite_nonneg(bad_state_delay_ms)) throw ConfigError(prefix + ".bad_state_delay_ms must be >= 0");
  if (!finite_nonneg(base_delay_ms)) throw ConfigError(prefix + ".base_delay_ms must be >= 0");
}

std::string_view to_string(TriggerMode mode) {
  return mode == TriggerMode::kPerTraversal ? "traversal" : "per-step";
}

TriggerMode parse_trigger_mode(std::string_view text) {
  if (text == "traversal" || text == "per-traversal") return TriggerMode::kPerTraversal;
  if (text == "per-step" || text == "step") return TriggerMode::kPerStep;
  throw ConfigError("unknown trigger mode '" + std::string(text) + "' (expected traversal|per-step)");
}

void EnvConfig::validate() const {
  path_a.validate("env.path_a");
  path_b.validate("env.path_b");
  if (!finite_nonneg(max_jitter_ms)) throw ConfigError("env.max_jitter_ms must be >= 0");
  if (!(std::isfinite(step_ms) && step_ms > 0.0)) throw ConfigError("env.step_ms must be > 0");
}

PathEnvironment::PathEnvironment(EnvConfig config) : config_(config), rng_(config.seed) {
  config_.validate();
}

void PathEnvironment::advance(double elapsed_ms, std::optional<Interface> traversed) {
  if (!(elapsed_ms > 0.0)) throw InvalidArgument("advance requires elapsed_ms > 0");

  const std::array<Condition, kInterfaceCount> at_start{states_[0].condition, states_[1].condition};
  clock_ms_ += elapsed_ms;
  for (auto& s : states_) {
    if (s.condition == Condition::kBad && clock_ms_ >= s.bad_until_ms) {
      s.condition = Condition::kGood;
      s.bad_until_ms = 0.0;
    }
  }

  if (config_.trigger_mode == TriggerMode::kPerStep) {
    maybe_trigger(Interface::kN6a, at_start[0]);
    maybe_trigger(Interface::kN6b, at_start[1]);
  } else if (traversed) {
    maybe_trigger(*traversed, at_start[index_of(*traversed)]);
  }
}

void PathEnvironment::maybe_trigger(Interface iface, Condition condition_at_start) {
  const PathParams& params = config_.path(iface);
  // The draw is consumed even when it cannot take effect so that the stream
  // position depends only on the sequence of opportunities.
  std::bernoulli_distribution trigger(params.failure_probability);
  const bool fired = trigger(rng_);
  if (!fired || condition_at_start == Condition::kBad) return;
  PathEnvState& s = states_[index_of(iface)];
  if (s.condition == Condition::kBad) return;
  s.condition = Condition::kBad;
  s.bad_until_ms = clock_ms_ + params.failure_duration_ms;
}

double PathEnvironment::observe_rtt(Interface iface) {
  const PathParams& params = config_.path(iface);
  double delay = params.base_delay_ms;
  if (states_[index_of(iface)].condition == Condition::kBad) delay += params.bad_state_delay_ms;
  if (config_.max_jitter_ms > 0.0) {
    std::uniform_real_distribution<double> jitter(-config_.max_jitter_ms, config_.max_jitter_ms);
    delay += jitter(rng_);
  }
  return std::max(0.0, delay);
}

void PathEnvironment::reset_conditions() { states_ = {}; }

double expected_bad_fraction(const PathParams& params, double step_ms) {
  if (params.failure_probability <= 0.0) {
    throw InvalidArgument("expected_bad_fraction is undefined for failure_probability == 0");
  }
  if (!(step_ms > 0.0)) throw InvalidArgument("step_ms must be > 0");
  const double good_ms = step_ms / params.failure_probability;
  return params.failure_duration_ms / (params.failure_duration_ms + good_ms);
}

std::uint64_t to_nanoseconds(double ms) { return static_cast<std::uint64_t>(std::llround(ms * 1e6)); }

}  // namespace eupf::env
