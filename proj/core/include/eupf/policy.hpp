/*
 * SPDX-License-Identifier: Apache-2.0
 * Copyright 2026 The eupf Authors
 */
#pragma once

#include <cstdint>
#include <deque>
#include <iosfwd>
#include <optional>
#include <vector>

#include "eupf/common.hpp"
#include "eupf/datapath.hpp"
#include "eupf/qnet.hpp"
#include "eupf/session.hpp"

namespace eupf::agent {

struct Transition {
  double state = 0.0;
  std::uint8_t action = 0;
  double reward = 0.0;
  double next_state = 0.0;

  friend bool operator==(const Transition&, const Transition&) = default;
};

/// Bounded FIFO of transitions; the oldest entry is evicted at capacity.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity = 2000);

  void push(const Transition& t);
  /// Uniform sample of `n` distinct entries. Requires n <= size().
  std::vector<Transition> sample(std::size_t n, Rng& rng) const;

  std::size_t size() const { return storage_.size(); }
  std::size_t capacity() const { return capacity_; }
  /// Oldest first.
  const Transition& operator[](std::size_t i) const { return storage_[i]; }

 private:
  std::size_t capacity_;
  std::deque<Transition> storage_;
};

/// Appends `t`, then returns a batch once the buffer holds at least
/// `batch_size` transitions.
std::optional<std::vector<Transition>> push_and_sample(ReplayBuffer& buffer, const Transition& t,
                                                       std::size_t batch_size, Rng& rng);

/// Per-episode multiplicative epsilon decay with a floor.
struct ExplorationSchedule {
  double eps_start = 0.9;
  double eps_end = 0.01;
  double decay = 0.990;

  double epsilon_at(std::uint64_t episode) const;
  void validate() const;
};

/// Min-max scaling of delay into [0, 1]. Rewards run high for low delay;
/// states are the scaled delay itself.
struct RewardNormalizer {
  double rtt_floor_ms = 0.0;
  double rtt_ceiling_ms = 803.0;

  double reward(double rtt_ms) const;
  double state(double rtt_ms) const;
  void validate() const;
};

/// Epsilon-greedy over the online network; greedy ties go to n6a.
Interface select_action(const nn::QNetwork& net, double state, double epsilon, Rng& rng);

Interface select_action_random(Rng& rng);

/// Greedy choice given already computed Q-values.
Interface greedy_action(const std::array<double, 2>& q);

struct DqnSettings {
  double gamma = 0.99;
  double learning_rate = 5e-4;
  std::size_t batch_size = 32;
  std::size_t replay_capacity = 2000;
  ExplorationSchedule exploration{};
  std::uint64_t target_update_episodes = 5;
  std::size_t hidden_units = 64;

  void validate() const;
};

struct StepResult {
  Interface action = Interface::kN6a;
  double rtt_ms = 0.0;
  Transition transition{};
  std::optional<double> loss;
};

class Agent {
 public:
  virtual ~Agent() = default;

  virtual void begin_episode(std::uint64_t episode) = 0;
  /// One decision cycle for the session's TEID.
  virtual StepResult step(dp::SharedMaps& maps, UeSession& session) = 0;
};

/// Reads the latest delay proxy for `teid` and scales it into a state;
/// before the first measurement the state is 0.
double observed_state(const dp::SharedMaps& maps, dp::Teid teid, const RewardNormalizer& normalizer);

class DqnAgent final : public Agent {
 public:
  struct Streams {
    Rng init;
    Rng exploration;
    Rng replay;
  };

  DqnAgent(DqnSettings settings, RewardNormalizer normalizer, Streams streams);

  /// Sets epsilon for the episode and refreshes the target network at
  /// every multiple of the update period (never at episode 0).
  void begin_episode(std::uint64_t episode) override;
  StepResult step(dp::SharedMaps& maps, UeSession& session) override;

  const nn::QNetwork& online() const { return online_; }
  const nn::QNetwork& target() const { return target_; }
  const nn::AdamState& adam() const { return adam_; }
  const ReplayBuffer& replay() const { return replay_; }
  double epsilon() const { return epsilon_; }
  std::uint64_t episode() const { return episode_; }
  std::uint64_t train_steps() const { return train_steps_; }

  /// Online network plus the episode index, so exploration resumes where
  /// it stopped.
  void save_checkpoint(std::ostream& out) const;
  void load_checkpoint(std::istream& in);

 private:
  DqnSettings settings_;
  RewardNormalizer normalizer_;
  Streams streams_;
  nn::QNetwork online_;
  nn::QNetwork target_;
  nn::AdamState adam_;
  ReplayBuffer replay_;
  double epsilon_;
  std::uint64_t episode_ = 0;
  std::uint64_t train_steps_ = 0;
};

inline constexpr char kAgentCheckpointMagic[] = "EUPF-AGENT 1";

/// Uniform baseline that still drives forwarding through the action map.
class RandomAgent final : public Agent {
 public:
  RandomAgent(RewardNormalizer normalizer, Rng rng);

  void begin_episode(std::uint64_t) override {}
  StepResult step(dp::SharedMaps& maps, UeSession& session) override;

 private:
  RewardNormalizer normalizer_;
  Rng rng_;
};

}  // namespace eupf::agent
