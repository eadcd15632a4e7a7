/*
 * SPDX-License-Identifier: Apache-2.0
 * Copyright 2026 The eupf Authors
 */
#pragma once

#include <array>
#include <cstdint>
#include <optional>

#include "eupf/common.hpp"

namespace eupf::env {

/// Degradation parameters of one N6 path.
struct PathParams {
  double failure_probability = 0.0;  ///< Bernoulli trigger chance per opportunity.
  double failure_duration_ms = 1.0;  ///< Deterministic BAD dwell time.
  double bad_state_delay_ms = 0.0;   ///< Delay added while BAD.
  double base_delay_ms = 0.0;        ///< Constant floor, 0 keeps the pure on/off model.

  void validate(std::string_view name) const;
};

enum class Condition : std::uint8_t { kGood, kBad };

struct PathEnvState {
  Condition condition = Condition::kGood;
  double bad_until_ms = 0.0;  // only meaningful while kBad
};

enum class TriggerMode : std::uint8_t {
  kPerTraversal,  ///< only the interface carrying the packet may degrade
  kPerStep,       ///< both interfaces draw a trigger on every advance
};

std::string_view to_string(TriggerMode mode);
TriggerMode parse_trigger_mode(std::string_view text);

struct EnvConfig {
  PathParams path_a{0.01, 10'000.0, 800.0, 0.0};
  PathParams path_b{0.10, 20'000.0, 800.0, 0.0};
  double max_jitter_ms = 3.0;
  TriggerMode trigger_mode = TriggerMode::kPerStep;
  double step_ms = 1000.0;
  std::uint64_t seed = 1;

  const PathParams& path(Interface iface) const { return iface == Interface::kN6a ? path_a : path_b; }
  void validate() const;
};

/// Two N6 paths with latent GOOD/BAD state, a millisecond clock and a
/// private random stream.
///
/// Within one advance() the trigger draw is made against the condition the
/// interface had when the interval began: an interface that recovers during
/// the interval cannot fail again until the next advance. This gives a
/// renewal cycle of D_i of BAD time followed by a geometric GOOD spell with
/// mean step/p_i, i.e. a long-run BAD share of D/(D + step/p).
class PathEnvironment {
 public:
  explicit PathEnvironment(EnvConfig config);

  /// Moves the clock forward, recovers expired degradations, then applies
  /// failure triggers according to the trigger mode.
  void advance(double elapsed_ms, std::optional<Interface> traversed);

  /// Noisy delay sample for the interface in its current condition. Draws
  /// jitter from the environment stream but leaves path state untouched.
  double observe_rtt(Interface iface);

  /// Puts both paths back to GOOD without touching the clock or the stream.
  void reset_conditions();

  const PathEnvState& state(Interface iface) const { return states_[index_of(iface)]; }
  double clock_ms() const { return clock_ms_; }
  const EnvConfig& config() const { return config_; }

 private:
  void maybe_trigger(Interface iface, Condition condition_at_start);

  EnvConfig config_;
  Rng rng_;
  double clock_ms_ = 0.0;
  std::array<PathEnvState, kInterfaceCount> states_{};
};

/// Long-run BAD fraction in per-step mode: D / (D + step / p).
/// Throws InvalidArgument when p == 0.
double expected_bad_fraction(const PathParams& params, double step_ms);

/// Converts the millisecond sim clock to the nanosecond timestamps the
/// datapath sees.
std::uint64_t to_nanoseconds(double ms);

}  // namespace eupf::env
