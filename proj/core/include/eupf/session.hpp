/*
 * SPDX-License-Identifier: Apache-2.0
 * Copyright 2026 The eupf Authors
 */
#pragma once

#include <cstdint>

#include "eupf/datapath.hpp"
#include "eupf/path_env.hpp"

namespace eupf {

struct EchoExchange {
  Interface egress = Interface::kN6a;
  std::uint64_t request_ns = 0;
  std::uint64_t response_ns = 0;
  double rtt_ms = 0.0;  // as measured by the datapath
};

/// One UE sending one uplink echo per decision step through the simulated
/// UPF. The request arrives at the end of the step interval, is steered by
/// the action map, degrades the traversed path per the trigger mode and
/// returns after the path's sampled delay.
class UeSession {
 public:
  UeSession(dp::Teid teid, dp::Datapath& datapath, env::PathEnvironment& env);

  EchoExchange exchange();

  dp::Teid teid() const { return teid_; }

 private:
  dp::Teid teid_;
  dp::Datapath& datapath_;
  env::PathEnvironment& env_;
  std::array<std::uint8_t, dp::kGtpuHeaderSize> header_;
};

}  // namespace eupf
