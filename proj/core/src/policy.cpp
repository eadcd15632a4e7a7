/*
 * SPDX-License-Identifier: Apache-2.0
 * Copyright 2026 The eupf Authors
 */
#include "eupf/policy.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <string>

namespace eupf::agent {

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw InvalidArgument("replay capacity must be positive");
}

void ReplayBuffer::push(const Transition& t) {
  if (storage_.size() == capacity_) storage_.pop_front();
  storage_.push_back(t);
}

std::vector<Transition> ReplayBuffer::sample(std::size_t n, Rng& rng) const {
  if (n > storage_.size()) throw InvalidArgument("cannot sample more transitions than stored");
  std::vector<std::size_t> picked;
  picked.reserve(n);
  std::vector<std::size_t> indices(storage_.size());
  std::iota(indices.begin(), indices.end(), std::size_t{0});
  std::sample(indices.begin(), indices.end(), std::back_inserter(picked), n, rng);
  std::vector<Transition> out;
  out.reserve(n);
  for (std::size_t i : picked) out.push_back(storage_[i]);
  return out;
}

std::optional<std::vector<Transition>> push_and_sample(ReplayBuffer& buffer, const Transition& t,
                                                       std::size_t batch_size, Rng& rng) {
  buffer.push(t);
  if (buffer.size() < batch_size) return std::nullopt;
  return buffer.sample(batch_size, rng);
}

double ExplorationSchedule::epsilon_at(std::uint64_t episode) const {
  return std::max(eps_end, eps_start * std::pow(decay, static_cast<double>(episode)));
}

void ExplorationSchedule::validate() const {
  if (!(eps_start >= 0.0 && eps_start <= 1.0)) throw ConfigError("dqn.epsilon_start must lie in [0, 1]");
  if (!(eps_end >= 0.0 && eps_end <= eps_start)) throw ConfigError("dqn.epsilon_end must lie in [0, epsilon_start]");
  if (!(decay > 0.0 && decay <= 1.0)) throw ConfigError("dqn.epsilon_decay must lie in (0, 1]");
}

double RewardNormalizer::state(double rtt_ms) const {
  if (!std::isfinite(rtt_ms)) throw InvalidArgument("delay must be finite");
  return std::clamp((rtt_ms - rtt_floor_ms) / (rtt_ceiling_ms - rtt_floor_ms), 0.0, 1.0);
}

double RewardNormalizer::reward(double rtt_ms) const {
  if (!std::isfinite(rtt_ms)) throw InvalidArgument("delay must be finite");
  return std::clamp(1.0 - (rtt_ms - rtt_floor_ms) / (rtt_ceiling_ms - rtt_floor_ms), 0.0, 1.0);
}

void RewardNormalizer::validate() const {
  if (!std::isfinite(rtt_floor_ms) || !std::isfinite(rtt_ceiling_ms) || !(rtt_ceiling_ms > rtt_floor_ms)) {
    throw ConfigError("reward.rtt_ceiling_ms must exceed reward.rtt_floor_ms");
  }
}

Interface greedy_action(const std::array<double, 2>& q) {
  return q[1] > q[0] ? Interface::kN6b : Interface::kN6a;
}

Interface select_action_random(Rng& rng) {
  std::uniform_int_distribution<std::uint32_t> coin(0, 1);
  return interface_from_index(coin(rng));
}

Interface select_action(const nn::QNetwork& net, double state, double epsilon, Rng& rng) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw InvalidArgument("epsilon must lie in [0, 1]");
  std::bernoulli_distribution explore(epsilon);
  if (explore(rng)) return select_action_random(rng);
  return greedy_action(net.forward(state));
}

void DqnSettings::validate() const {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw ConfigError("dqn.gamma must lie in [0, 1]");
  if (!(learning_rate > 0.0 && std::isfinite(learning_rate))) throw ConfigError("dqn.learning_rate must be > 0");
  if (batch_size == 0) throw ConfigError("dqn.batch_size must be >= 1");
  if (replay_capacity < batch_size) throw ConfigError("dqn.replay_capacity must be >= dqn.batch_size");
  if (target_update_episodes == 0) throw ConfigError("dqn.target_update_episodes must be >= 1");
  if (hidden_units == 0) throw ConfigError("dqn.hidden_units must be >= 1");
  exploration.validate();
}

double observed_state(const dp::SharedMaps& maps, dp::Teid teid, const RewardNormalizer& normalizer) {
  const auto obs = maps.read_observation(teid);
  if (!obs) return 0.0;
  return normalizer.state(static_cast<double>(obs->last_rtt_ns) / 1e6);
}

DqnAgent::DqnAgent(DqnSettings settings, RewardNormalizer normalizer, Streams streams)
    : settings_(settings),
      normalizer_(normalizer),
      streams_(std::move(streams)),
      online_(nn::QNetwork::initialized(streams_.init, settings.hidden_units, settings.hidden_units)),
      target_(nn::sync_target(online_)),
      adam_(nn::AdamState::for_network(online_, settings.learning_rate)),
      replay_(settings.replay_capacity),
      epsilon_(settings.exploration.epsilon_at(0)) {
  settings_.validate();
  normalizer_.validate();
}

void DqnAgent::begin_episode(std::uint64_t episode) {
  episode_ = episode;
  epsilon_ = settings_.exploration.epsilon_at(episode);
  if (episode > 0 && episode % settings_.target_update_episodes == 0) target_ = nn::sync_target(online_);
}

StepResult DqnAgent::step(dp::SharedMaps& maps, UeSession& session) {
  StepResult result;
  const double state = observed_state(maps, session.teid(), normalizer_);
  const Interface chosen = select_action(online_, state, epsilon_, streams_.exploration);
  maps.write_action(session.teid(), chosen);

  const EchoExchange ex = session.exchange();
  result.action = ex.egress;
  result.rtt_ms = ex.rtt_ms;
  result.transition = Transition{state, static_cast<std::uint8_t>(index_of(ex.egress)), normalizer_.reward(ex.rtt_ms),
                                 observed_state(maps, session.teid(), normalizer_)};

  auto batch = push_and_sample(replay_, result.transition, settings_.batch_size, streams_.replay);
  if (batch) {
    nn::TrainBatch train;
    std::vector<double> rewards, next_states;
    for (const Transition& t : *batch) {
      train.states.push_back(t.state);
      train.actions.push_back(t.action);
      rewards.push_back(t.reward);
      next_states.push_back(t.next_state);
    }
    train.targets = nn::td_targets(rewards, next_states, target_, settings_.gamma);
    result.loss = nn::train_step(online_, adam_, train);
    ++train_steps_;
  }
  return result;
}

void DqnAgent::save_checkpoint(std::ostream& out) const {
  out << kAgentCheckpointMagic << '\n' << "episode " << episode_ << '\n';
  online_.save(out);
}

void DqnAgent::load_checkpoint(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kAgentCheckpointMagic) {
    throw InvalidArgument("not an agent checkpoint (bad magic)");
  }
  std::string tag;
  std::uint64_t episode = 0;
  if (!(in >> tag >> episode) || tag != "episode") throw InvalidArgument("agent checkpoint: missing episode");
  in.ignore(1);  // newline before the network block
  nn::QNetwork net = nn::QNetwork::load(in, online_.widths());
  online_ = net;
  target_ = nn::sync_target(online_);
  adam_ = nn::AdamState::for_network(online_, settings_.learning_rate);
  episode_ = episode;
  epsilon_ = settings_.exploration.epsilon_at(episode);
}

RandomAgent::RandomAgent(RewardNormalizer normalizer, Rng rng) : normalizer_(normalizer), rng_(std::move(rng)) {
  normalizer_.validate();
}

StepResult RandomAgent::step(dp::SharedMaps& maps, UeSession& session) {
  StepResult result;
  const double state = observed_state(maps, session.teid(), normalizer_);
  maps.write_action(session.teid(), select_action_random(rng_));
  const EchoExchange ex = session.exchange();
  result.action = ex.egress;
  result.rtt_ms = ex.rtt_ms;
  result.transition = Transition{state, static_cast<std::uint8_t>(index_of(ex.egress)), normalizer_.reward(ex.rtt_ms),
                                 observed_state(maps, session.teid(), normalizer_)};
  return result;
}

}  // namespace eupf::agent
