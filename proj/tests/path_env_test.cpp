/*
 * SPDX-License-Identifier: Apache-2.0
 * Copyright 2026 The eupf Authors
 */
#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "eupf/path_env.hpp"

namespace eupf::env {
namespace {

EnvConfig noiseless(TriggerMode mode) {
  EnvConfig c;
  c.max_jitter_ms = 0.0;
  c.trigger_mode = mode;
  return c;
}

TEST(PathEnvTest, ZeroProbabilityNeverDegrades) {
  EnvConfig c = noiseless(TriggerMode::kPerStep);
  c.path_a.failure_probability = 0.0;
  c.path_b.failure_probability = 0.0;
  PathEnvironment env(c);
  for (int i = 0; i < 10'000; ++i) {
    env.advance(c.step_ms, Interface::kN6a);
    ASSERT_EQ(env.state(Interface::kN6a).condition, Condition::kGood);
    ASSERT_EQ(env.state(Interface::kN6b).condition, Condition::kGood);
  }
}

TEST(PathEnvTest, CertainTriggerOnFirstTraversal) {
  EnvConfig c = noiseless(TriggerMode::kPerTraversal);
  c.path_b.failure_probability = 1.0;
  PathEnvironment env(c);
  env.advance(1000.0, Interface::kN6b);
  EXPECT_EQ(env.state(Interface::kN6b).condition, Condition::kBad);
  EXPECT_DOUBLE_EQ(env.state(Interface::kN6b).bad_until_ms, 1000.0 + c.path_b.failure_duration_ms);
  // n6a was not traversed, so it cannot have degraded in traversal mode.
  EXPECT_EQ(env.state(Interface::kN6a).condition, Condition::kGood);
}

TEST(PathEnvTest, TraversalModeOnlyTouchesTraversedPath) {
  EnvConfig c = noiseless(TriggerMode::kPerTraversal);
  c.path_a.failure_probability = 1.0;
  c.path_b.failure_probability = 1.0;
  PathEnvironment env(c);
  env.advance(1000.0, std::nullopt);
  EXPECT_EQ(env.state(Interface::kN6a).condition, Condition::kGood);
  EXPECT_EQ(env.state(Interface::kN6b).condition, Condition::kGood);
  env.advance(1000.0, Interface::kN6a);
  EXPECT_EQ(env.state(Interface::kN6a).condition, Condition::kBad);
  EXPECT_EQ(env.state(Interface::kN6b).condition, Condition::kGood);
}

TEST(PathEnvTest, TriggerWhileBadDoesNotExtendDwell) {
  EnvConfig c = noiseless(TriggerMode::kPerStep);
  c.path_a.failure_probability = 1.0;
  c.path_a.failure_duration_ms = 5000.0;
  PathEnvironment env(c);
  env.advance(1000.0, std::nullopt);
  const double until = env.state(Interface::kN6a).bad_until_ms;
  for (int i = 0; i < 4; ++i) {
    env.advance(1000.0, std::nullopt);
    EXPECT_DOUBLE_EQ(env.state(Interface::kN6a).bad_until_ms, until);
  }
}

TEST(PathEnvTest, RecoveryIsExact) {
  EnvConfig c = noiseless(TriggerMode::kPerTraversal);
  c.path_a.failure_probability = 1.0;
  c.path_a.failure_duration_ms = 3000.0;
  PathEnvironment env(c);
  env.advance(1000.0, Interface::kN6a);  // BAD over [1000, 4000)
  for (double t : {2000.0, 3000.0}) {
    env.advance(1000.0, std::nullopt);
    EXPECT_EQ(env.clock_ms(), t);
    EXPECT_EQ(env.state(Interface::kN6a).condition, Condition::kBad);
  }
  env.advance(1000.0, std::nullopt);
  EXPECT_EQ(env.clock_ms(), 4000.0);
  EXPECT_EQ(env.state(Interface::kN6a).condition, Condition::kGood);
}

TEST(PathEnvTest, CertainTriggerWithDwellOfOneStepAlternates) {
  EnvConfig c = noiseless(TriggerMode::kPerStep);
  c.path_a.failure_probability = 1.0;
  c.path_a.failure_duration_ms = 1000.0;
  PathEnvironment env(c);
  std::vector<Condition> seen;
  for (int i = 0; i < 6; ++i) {
    env.advance(1000.0, std::nullopt);
    seen.push_back(env.state(Interface::kN6a).condition);
  }
  EXPECT_EQ(seen, (std::vector<Condition>{Condition::kBad, Condition::kGood, Condition::kBad, Condition::kGood,
                                          Condition::kBad, Condition::kGood}));
}

TEST(PathEnvTest, ObserveNoiselessValues) {
  EnvConfig c = noiseless(TriggerMode::kPerTraversal);
  c.path_a.failure_probability = 1.0;
  PathEnvironment env(c);
  EXPECT_DOUBLE_EQ(env.observe_rtt(Interface::kN6a), 0.0);
  env.advance(1000.0, Interface::kN6a);
  EXPECT_DOUBLE_EQ(env.observe_rtt(Interface::kN6a), 800.0);
}

TEST(PathEnvTest, ObserveDoesNotMutatePathState) {
  EnvConfig c;
  c.path_a.failure_probability = 1.0;
  PathEnvironment env(c);
  env.advance(1000.0, Interface::kN6a);
  const auto before = env.state(Interface::kN6a);
  for (int i = 0; i < 100; ++i) env.observe_rtt(Interface::kN6a);
  EXPECT_EQ(env.state(Interface::kN6a).condition, before.condition);
  EXPECT_EQ(env.state(Interface::kN6a).bad_until_ms, before.bad_until_ms);
  EXPECT_EQ(env.clock_ms(), 1000.0);
}

TEST(PathEnvTest, JitterStaysWithinBoundsAndClampsAtZero) {
  EnvConfig c;
  c.trigger_mode = TriggerMode::kPerStep;
  c.path_b.base_delay_ms = 2.0;
  PathEnvironment env(c);
  bool saw_zero = false;
  for (int i = 0; i < 20'000; ++i) {
    env.advance(c.step_ms, std::nullopt);
    for (Interface iface : {Interface::kN6a, Interface::kN6b}) {
      const auto& p = c.path(iface);
      const double rtt = env.observe_rtt(iface);
      ASSERT_GE(rtt, 0.0);
      ASSERT_LE(rtt, p.base_delay_ms + p.bad_state_delay_ms + c.max_jitter_ms);
      if (env.state(iface).condition == Condition::kGood) {
        ASSERT_LE(rtt, p.base_delay_ms + c.max_jitter_ms);
        if (iface == Interface::kN6a && rtt == 0.0) saw_zero = true;
      }
    }
  }
  EXPECT_TRUE(saw_zero);
}

TEST(PathEnvTest, SameSeedSameTrajectory) {
  EnvConfig c;
  c.seed = 77;
  PathEnvironment a(c), b(c);
  for (int i = 0; i < 5000; ++i) {
    const Interface iface = (i % 3 == 0) ? Interface::kN6b : Interface::kN6a;
    a.advance(c.step_ms, iface);
    b.advance(c.step_ms, iface);
    ASSERT_EQ(a.observe_rtt(iface), b.observe_rtt(iface));
    ASSERT_EQ(a.state(iface).condition, b.state(iface).condition);
  }
}

TEST(PathEnvTest, ExpectedBadFractionClosedForm) {
  EXPECT_NEAR(expected_bad_fraction({0.01, 10'000.0, 800.0, 0.0}, 1000.0), 10.0 / 110.0, 1e-15);
  EXPECT_NEAR(expected_bad_fraction({0.10, 20'000.0, 800.0, 0.0}, 1000.0), 20.0 / 30.0, 1e-15);
  EXPECT_DOUBLE_EQ(expected_bad_fraction({1.0, 1000.0, 800.0, 0.0}, 1000.0), 0.5);
  EXPECT_THROW(expected_bad_fraction({0.0, 1000.0, 800.0, 0.0}, 1000.0), InvalidArgument);
}

// Monte-Carlo against the renewal ratio for a few parameter corners.
TEST(PathEnvTest, BadFractionMatchesRenewalRatio) {
  struct Case {
    double p, duration_ms;
  };
  for (const Case& k : {Case{0.01, 10'000.0}, Case{0.1, 20'000.0}, Case{0.3, 2000.0}, Case{1.0, 3000.0}}) {
    EnvConfig c = noiseless(TriggerMode::kPerStep);
    c.path_a.failure_probability = k.p;
    c.path_a.failure_duration_ms = k.duration_ms;
    c.seed = 11;
    PathEnvironment env(c);
    const int steps = 400'000;
    int bad = 0;
    for (int i = 0; i < steps; ++i) {
      env.advance(c.step_ms, std::nullopt);
      bad += env.state(Interface::kN6a).condition == Condition::kBad;
    }
    EXPECT_NEAR(static_cast<double>(bad) / steps, expected_bad_fraction(c.path_a, c.step_ms), 0.02)
        << "p=" << k.p << " D=" << k.duration_ms;
  }
}

TEST(PathEnvTest, ConfigValidation) {
  EnvConfig c;
  c.path_a.failure_probability = 1.5;
  EXPECT_THROW(PathEnvironment{c}, ConfigError);
  c = EnvConfig{};
  c.path_b.failure_duration_ms = 0.0;
  EXPECT_THROW(PathEnvironment{c}, ConfigError);
  c = EnvConfig{};
  c.step_ms = 0.0;
  EXPECT_THROW(PathEnvironment{c}, ConfigError);
  c = EnvConfig{};
  c.max_jitter_ms = -1.0;
  EXPECT_THROW(PathEnvironment{c}, ConfigError);
  PathEnvironment ok{EnvConfig{}};
  EXPECT_THROW(ok.advance(0.0, std::nullopt), InvalidArgument);
}

TEST(PathEnvTest, TriggerModeParsing) {
  EXPECT_EQ(parse_trigger_mode("traversal"), TriggerMode::kPerTraversal);
  EXPECT_EQ(parse_trigger_mode("per-step"), TriggerMode::kPerStep);
  EXPECT_THROW(parse_trigger_mode("sometimes"), ConfigError);
}

}  // namespace
}  // namespace eupf::env
