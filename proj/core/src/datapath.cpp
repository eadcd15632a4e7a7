/*
 * SPDX-License-Identifier: Apache-2.0
 * Copyright 2026 The eupf Authors
 */
#include "eupf/datapath.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace eupf::dp {

Teid parse_teid(std::span<const std::uint8_t> header) {
  if (header.size() < kGtpuHeaderSize) {
    throw MalformedPacket("GTP-U header needs 8 bytes, got " + std::to_string(header.size()));
  }
  const unsigned version = header[0] >> 5;
  if (version != 1) {
    throw UnsupportedVersion("unsupported GTP version " + std::to_string(version));
  }
  const std::uint32_t teid = (std::uint32_t{header[4]} << 24) | (std::uint32_t{header[5]} << 16) |
                             (std::uint32_t{header[6]} << 8) | std::uint32_t{header[7]};
  return Teid{teid};
}

std::array<std::uint8_t, kGtpuHeaderSize> make_gtpu_header(Teid teid, std::uint16_t payload_length,
                                                            std::uint8_t message_type) {
  return {kGtpuFlagsV1,
          message_type,
          static_cast<std::uint8_t>(payload_length >> 8),
          static_cast<std::uint8_t>(payload_length & 0xff),
          static_cast<std::uint8_t>(teid.value >> 24),
          static_cast<std::uint8_t>((teid.value >> 16) & 0xff),
          static_cast<std::uint8_t>((teid.value >> 8) & 0xff),
          static_cast<std::uint8_t>(teid.value & 0xff)};
}

std::optional<std::uint64_t> SharedMaps::measure_rtt(Teid teid, std::uint64_t now_ns) {
  if (now_ns == 0) throw InvalidArgument("timestamp 0 is reserved");
  std::lock_guard lock(rtt_mutex_);
  auto it = rtt_map_.find(teid);
  if (it == rtt_map_.end()) {
    rtt_map_.emplace(teid, RoundTripEntry{now_ns, 0, 0});
    return std::nullopt;
  }
  RoundTripEntry& entry = it->second;
  if (entry.ts_request == 0) {
    entry.ts_request = now_ns;
    return std::nullopt;
  }
  if (now_ns < entry.ts_request) {
    entry.ts_request = now_ns;
    throw ClockSkew("timestamp for TEID " + std::to_string(teid.value) + " went backwards");
  }
  entry.last_rtt = now_ns - entry.ts_request;
  entry.ts_request = 0;
  ++entry.count;
  return entry.last_rtt;
}

Interface SharedMaps::forward(Teid teid, std::uint64_t now_ns) {
  Interface egress = Interface::kN6a;
  {
    std::lock_guard lock(action_mutex_);
    if (auto it = action_map_.find(teid); it != action_map_.end()) egress = it->second;
  }
  std::lock_guard lock(counter_mutex_);
  counters_.timestamps_ns[index_of(egress)].push_back(now_ns);
  return egress;
}

std::optional<Observation> SharedMaps::read_observation(Teid teid) const {
  std::lock_guard lock(rtt_mutex_);
  auto it = rtt_map_.find(teid);
  if (it == rtt_map_.end() || it->second.count == 0) return std::nullopt;
  return Observation{it->second.last_rtt, it->second.count};
}

void SharedMaps::write_action(Teid teid, Interface action) {
  std::lock_guard lock(action_mutex_);
  action_map_[teid] = action;
}

void SharedMaps::write_action(Teid teid, std::uint32_t interface_id) {
  write_action(teid, interface_from_index(interface_id));
}

std::optional<RoundTripEntry> SharedMaps::rtt_entry(Teid teid) const {
  std::lock_guard lock(rtt_mutex_);
  auto it = rtt_map_.find(teid);
  if (it == rtt_map_.end()) return std::nullopt;
  return it->second;
}

PacketOutCounters SharedMaps::packet_out() const {
  std::lock_guard lock(counter_mutex_);
  return counters_;
}

std::uint64_t SharedMaps::forwarded_total() const {
  std::lock_guard lock(counter_mutex_);
  return counters_.total();
}

void SharedMaps::dump_rtt_csv(std::ostream& out) const {
  std::vector<std::pair<Teid, RoundTripEntry>> rows;
  {
    std::lock_guard lock(rtt_mutex_);
    rows.assign(rtt_map_.begin(), rtt_map_.end());
  }
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  out << "teid,last_rtt_ns,count\n";
  for (const auto& [teid, entry] : rows) {
    out << teid.value << ',' << entry.last_rtt << ',' << entry.count << '\n';
  }
}

PacketOutHistogram packet_out_histogram(const PacketOutCounters& counters, double interval_s,
                                        std::optional<TimeWindow> window) {
  if (!(interval_s > 0.0)) throw InvalidArgument("interval_s must be > 0");
  PacketOutHistogram hist;
  hist.interval_s = interval_s;
  const auto interval_ns = static_cast<std::uint64_t>(std::llround(interval_s * 1e9));

  TimeWindow w;
  if (window) {
    w = *window;
    if (w.end_ns < w.begin_ns) throw InvalidArgument("window end precedes begin");
  } else {
    if (counters.total() == 0) return hist;
    std::uint64_t lo = UINT64_MAX;
    std::uint64_t hi = 0;
    for (const auto& ts : counters.timestamps_ns) {
      for (std::uint64_t t : ts) {
        lo = std::min(lo, t);
        hi = std::max(hi, t);
      }
    }
    w.begin_ns = lo;
    w.end_ns = lo + ((hi - lo) / interval_ns + 1) * interval_ns;
  }
  if (w.end_ns == w.begin_ns) return hist;

  const std::uint64_t n_buckets = (w.end_ns - w.begin_ns + interval_ns - 1) / interval_ns;
  hist.buckets.assign(n_buckets, {0, 0});
  for (std::size_t i = 0; i < kInterfaceCount; ++i) {
    for (std::uint64_t t : counters.timestamps_ns[i]) {
      if (t < w.begin_ns || t >= w.end_ns) continue;
      ++hist.buckets[(t - w.begin_ns) / interval_ns][i];
    }
  }
  for (std::size_t i = 0; i < kInterfaceCount; ++i) {
    std::uint64_t sum = 0;
    for (const auto& b : hist.buckets) sum += b[i];
    hist.mean_per_interval[i] = static_cast<double>(sum) / static_cast<double>(n_buckets);
  }
  return hist;
}

PacketVerdict Datapath::process(const PacketEvent& event) {
  PacketVerdict verdict;
  verdict.teid = parse_teid(event.raw_header);
  if (event.direction == Direction::kRequest) {
    verdict.egress = maps_.forward(verdict.teid, event.timestamp_ns);
  }
  verdict.measured_ns = maps_.measure_rtt(verdict.teid, event.timestamp_ns);
  return verdict;
}

}  // namespace eupf::dp
