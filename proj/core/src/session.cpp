/*
 * SPDX-License-Identifier: Apache-2.0
 * Copyright 2026 The eupf Authors
 */
#include "eupf/session.hpp"

namespace eupf {

UeSession::UeSession(dp::Teid teid, dp::Datapath& datapath, env::PathEnvironment& env)
    : teid_(teid), datapath_(datapath), env_(env), header_(dp::make_gtpu_header(teid, 64)) {}

EchoExchange UeSession::exchange() {
  const double step_ms = env_.config().step_ms;
  EchoExchange ex;
  ex.request_ns = env::to_nanoseconds(env_.clock_ms() + step_ms);

  const dp::PacketVerdict request = datapath_.process({header_, ex.request_ns, dp::Direction::kRequest});
  ex.egress = *request.egress;
  if (request.measured_ns) {
    // The previous step left a request unanswered; the pairing is now out of
    // phase and would report the step interval as a delay.
    throw Error("echo request closed a pending pair for TEID " + std::to_string(teid_.value));
  }

  env_.advance(step_ms, ex.egress);
  const double sampled_ms = env_.observe_rtt(ex.egress);
  ex.response_ns = ex.request_ns + env::to_nanoseconds(sampled_ms);

  const dp::PacketVerdict response = datapath_.process({header_, ex.response_ns, dp::Direction::kResponse});
  if (!response.measured_ns) throw Error("echo response did not complete a measurement");
  ex.rtt_ms = static_cast<double>(*response.measured_ns) / 1e6;
  return ex;
}

}  // namespace eupf
