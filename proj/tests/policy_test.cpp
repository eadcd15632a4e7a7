/*
 * SPDX-License-Identifier: Apache-2.0
 * Copyright 2026 The eupf Authors
 */
#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <sstream>

#include "eupf/path_env.hpp"
#include "eupf/policy.hpp"
#include "eupf/session.hpp"

namespace eupf::agent {
namespace {

TEST(ExplorationTest, ScheduleValues) {
  const ExplorationSchedule s;
  EXPECT_DOUBLE_EQ(s.epsilon_at(0), 0.9);
  EXPECT_NEAR(s.epsilon_at(400), 0.01615549794754068, 1e-6);
  EXPECT_DOUBLE_EQ(s.epsilon_at(1'000'000), 0.01);
  for (std::uint64_t e = 1; e < 1000; ++e) ASSERT_LE(s.epsilon_at(e), s.epsilon_at(e - 1));
}

TEST(ExplorationTest, Validation) {
  EXPECT_THROW((ExplorationSchedule{0.9, 0.01, 1.5}.validate()), ConfigError);
  EXPECT_THROW((ExplorationSchedule{0.01, 0.9, 0.99}.validate()), ConfigError);
  EXPECT_NO_THROW(ExplorationSchedule{}.validate());
}

TEST(NormalizerTest, ReferenceValues) {
  const RewardNormalizer n;
  EXPECT_DOUBLE_EQ(n.reward(0.0), 1.0);
  EXPECT_DOUBLE_EQ(n.reward(803.0), 0.0);
  EXPECT_NEAR(n.reward(800.0), 0.0037359900373599153, 1e-15);
  EXPECT_DOUBLE_EQ(n.state(0.0), 0.0);
  EXPECT_DOUBLE_EQ(n.state(803.0), 1.0);
  // Clamped outside the range.
  EXPECT_DOUBLE_EQ(n.reward(2000.0), 0.0);
  EXPECT_DOUBLE_EQ(n.state(-5.0), 0.0);
  for (double rtt = 0.0; rtt <= 803.0; rtt += 7.3) ASSERT_NEAR(n.reward(rtt) + n.state(rtt), 1.0, 1e-12);
  EXPECT_THROW(n.reward(NAN), InvalidArgument);
  EXPECT_THROW((RewardNormalizer{5.0, 5.0}.validate()), ConfigError);
}

TEST(SelectActionTest, GreedyTieGoesToN6a) {
  EXPECT_EQ(greedy_action({0.0, 0.0}), Interface::kN6a);
  EXPECT_EQ(greedy_action({0.1, 0.2}), Interface::kN6b);
  EXPECT_EQ(greedy_action({0.3, 0.2}), Interface::kN6a);
  Rng rng(1);
  const nn::QNetwork zero;
  for (int i = 0; i < 100; ++i) ASSERT_EQ(select_action(zero, 0.5, 0.0, rng), Interface::kN6a);
}

TEST(SelectActionTest, ExplorationFrequencies) {
  nn::QNetwork prefers_b(1, 1);
  prefers_b.bias(2)[1] = 1.0;
  Rng rng(2);
  for (double eps : {0.0, 0.2, 0.9, 1.0}) {
    const int n = 100'000;
    int a = 0;
    for (int i = 0; i < n; ++i) a += select_action(prefers_b, 0.3, eps, rng) == Interface::kN6a;
    // n6a only comes from exploration: eps / 2.
    EXPECT_NEAR(static_cast<double>(a) / n, eps / 2.0, 0.01) << "eps=" << eps;
  }
}

TEST(SelectActionTest, AffineRewardTransformKeepsGreedyChoice) {
  Rng rng(3);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int i = 0; i < 1000; ++i) {
    const std::array<double, 2> q{u(rng), u(rng)};
    const double scale = 0.1 + std::abs(u(rng));
    const double shift = u(rng);
    ASSERT_EQ(greedy_action(q), greedy_action({scale * q[0] + shift, scale * q[1] + shift}));
  }
}

TEST(ReplayBufferTest, WarmUpAndEviction) {
  ReplayBuffer buffer(2000);
  Rng rng(4);
  for (int i = 0; i < 31; ++i) {
    ASSERT_FALSE(push_and_sample(buffer, Transition{static_cast<double>(i), 0, 0.0, 0.0}, 32, rng));
  }
  const auto first = push_and_sample(buffer, Transition{31.0, 0, 0.0, 0.0}, 32, rng);
  ASSERT_TRUE(first);
  EXPECT_EQ(first->size(), 32u);
  for (int i = 32; i < 2500; ++i) buffer.push(Transition{static_cast<double>(i), 0, 0.0, 0.0});
  EXPECT_EQ(buffer.size(), 2000u);
  EXPECT_EQ(buffer[0].state, 500.0);
  EXPECT_EQ(buffer[1999].state, 2499.0);
}

TEST(ReplayBufferTest, SampleIsDistinctAndUniform) {
  ReplayBuffer buffer(100);
  for (int i = 0; i < 100; ++i) buffer.push(Transition{static_cast<double>(i), 0, 0.0, 0.0});
  Rng rng(5);
  std::vector<int> hits(100, 0);
  const int draws = 20'000;
  for (int d = 0; d < draws; ++d) {
    const auto batch = buffer.sample(32, rng);
    std::map<double, int> seen;
    for (const auto& t : batch) ASSERT_EQ(++seen[t.state], 1);
    for (const auto& t : batch) ++hits[static_cast<int>(t.state)];
  }
  // Each index is included with probability 32/100.
  const double expected = draws * 0.32;
  const double sd = std::sqrt(draws * 0.32 * 0.68);
  for (int h : hits) ASSERT_NEAR(h, expected, 5.0 * sd);
  EXPECT_THROW(buffer.sample(101, rng), InvalidArgument);
}

struct Rig {
  explicit Rig(env::EnvConfig config = {}) : env(config), datapath(maps), session(dp::Teid{1}, datapath, env) {}
  dp::SharedMaps maps;
  env::PathEnvironment env;
  dp::Datapath datapath;
  UeSession session;
};

TEST(ObservedStateTest, ColdStartIsZero) {
  Rig rig;
  EXPECT_EQ(observed_state(rig.maps, dp::Teid{1}, RewardNormalizer{}), 0.0);
  rig.session.exchange();
  EXPECT_GE(observed_state(rig.maps, dp::Teid{1}, RewardNormalizer{}), 0.0);
}

DqnAgent::Streams streams(std::uint64_t seed) {
  return {make_stream(seed, "init"), make_stream(seed, "exploration"), make_stream(seed, "replay")};
}

TEST(DqnAgentTest, EpisodeOfSixtyStepsProducesChainedTransitions) {
  Rig rig;
  DqnAgent agent(DqnSettings{}, RewardNormalizer{}, streams(1));
  agent.begin_episode(0);
  EXPECT_DOUBLE_EQ(agent.epsilon(), 0.9);
  std::vector<StepResult> steps;
  for (int i = 0; i < 60; ++i) steps.push_back(agent.step(rig.maps, rig.session));
  EXPECT_EQ(agent.replay().size(), 60u);
  EXPECT_EQ(agent.train_steps(), 60u - 31u);
  EXPECT_EQ(steps.front().transition.state, 0.0);
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const auto& t = steps[i].transition;
    ASSERT_EQ(t.action, index_of(steps[i].action));
    ASSERT_NEAR(t.reward, 1.0 - t.next_state, 1e-12);
    ASSERT_NEAR(t.next_state, RewardNormalizer{}.state(steps[i].rtt_ms), 1e-12);
    if (i > 0) ASSERT_EQ(t.state, steps[i - 1].transition.next_state);
    ASSERT_EQ(steps[i].loss.has_value(), i >= 31);
  }
  EXPECT_EQ(rig.maps.forwarded_total(), 60u);
}

TEST(DqnAgentTest, TargetRefreshOnlyAtUpdatePeriod) {
  Rig rig;
  DqnAgent agent(DqnSettings{}, RewardNormalizer{}, streams(2));
  std::uint64_t last = agent.target().fingerprint();
  for (std::uint64_t ep = 0; ep < 16; ++ep) {
    agent.begin_episode(ep);
    const std::uint64_t fp = agent.target().fingerprint();
    if (ep > 0 && ep % 5 == 0) {
      EXPECT_EQ(agent.target(), agent.online()) << ep;
    } else {
      EXPECT_EQ(fp, last) << ep;
    }
    last = fp;
    for (int i = 0; i < 60; ++i) agent.step(rig.maps, rig.session);
  }
}

TEST(DqnAgentTest, CheckpointRoundTrip) {
  Rig rig;
  DqnAgent agent(DqnSettings{}, RewardNormalizer{}, streams(3));
  agent.begin_episode(0);
  for (int i = 0; i < 40; ++i) agent.step(rig.maps, rig.session);
  agent.begin_episode(1);
  std::stringstream buf;
  agent.save_checkpoint(buf);

  DqnAgent restored(DqnSettings{}, RewardNormalizer{}, streams(4));
  restored.load_checkpoint(buf);
  EXPECT_EQ(restored.online(), agent.online());
  EXPECT_EQ(restored.episode(), 1u);

  std::stringstream junk("EUPF-QNET 1\n");
  EXPECT_THROW(restored.load_checkpoint(junk), InvalidArgument);
}

TEST(RandomAgentTest, RoughlyEvenSplitThroughActionMap) {
  Rig rig;
  RandomAgent agent(RewardNormalizer{}, Rng(6));
  int b = 0;
  for (int i = 0; i < 4000; ++i) b += agent.step(rig.maps, rig.session).action == Interface::kN6b;
  EXPECT_NEAR(b / 4000.0, 0.5, 0.04);
  const auto counters = rig.maps.packet_out();
  EXPECT_EQ(counters.total(Interface::kN6b), static_cast<std::uint64_t>(b));
}

TEST(DqnSettingsTest, Validation) {
  DqnSettings s;
  s.batch_size = 0;
  EXPECT_THROW(s.validate(), ConfigError);
  s = DqnSettings{};
  s.batch_size = 3000;  // larger than the replay capacity
  EXPECT_THROW(s.validate(), ConfigError);
  s = DqnSettings{};
  s.gamma = 1.2;
  EXPECT_THROW(s.validate(), ConfigError);
  EXPECT_NO_THROW(DqnSettings{}.validate());
}

}  // namespace
}  // namespace eupf::agent
