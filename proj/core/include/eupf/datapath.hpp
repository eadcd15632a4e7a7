/*
 * SPDX-License-Identifier: Apache-2.0
 * Copyright 2026 The eupf Authors
 */
#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <mutex>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "eupf/common.hpp"

namespace eupf::dp {

/// GTP-U tunnel endpoint identifier.
struct Teid {
  std::uint32_t value = 0;
  friend constexpr auto operator<=>(Teid, Teid) = default;
};

class MalformedPacket : public Error {
 public:
  using Error::Error;
};

class UnsupportedVersion : public Error {
 public:
  using Error::Error;
};

class ClockSkew : public Error {
 public:
  using Error::Error;
};

inline constexpr std::size_t kGtpuHeaderSize = 8;
inline constexpr std::uint8_t kGtpuFlagsV1 = 0x30;    // version 1, PT 1, no optional fields
inline constexpr std::uint8_t kGtpuMsgTPdu = 0xff;

/// Reads the TEID out of a GTP-U fixed header: flags, message type,
/// length (be16), TEID (be32). Only version 1 is accepted.
Teid parse_teid(std::span<const std::uint8_t> header);

/// Minimal 8-byte GTP-U header carrying `teid`.
std::array<std::uint8_t, kGtpuHeaderSize> make_gtpu_header(Teid teid, std::uint16_t payload_length = 0,
                                                            std::uint8_t message_type = kGtpuMsgTPdu);

/// Value of the TEID-keyed round-trip map.
struct RoundTripEntry {
  std::uint64_t ts_request = 0;  // ns, 0 when nothing is in flight
  std::uint64_t last_rtt = 0;    // ns
  std::uint64_t count = 0;       // completed pairings

  friend bool operator==(const RoundTripEntry&, const RoundTripEntry&) = default;
};

struct Observation {
  std::uint64_t last_rtt_ns = 0;
  std::uint64_t count = 0;
};

/// Egress timestamps per interface, one entry per forwarded packet.
struct PacketOutCounters {
  std::array<std::vector<std::uint64_t>, kInterfaceCount> timestamps_ns;

  std::uint64_t total(Interface iface) const { return timestamps_ns[index_of(iface)].size(); }
  std::uint64_t total() const { return total(Interface::kN6a) + total(Interface::kN6b); }
};

struct PacketOutHistogram {
  double interval_s = 0.0;
  std::vector<std::array<std::uint64_t, kInterfaceCount>> buckets;
  std::array<double, kInterfaceCount> mean_per_interval{};

  bool empty() const { return buckets.empty(); }
};

/// Half-open time window [begin_ns, end_ns).
struct TimeWindow {
  std::uint64_t begin_ns = 0;
  std::uint64_t end_ns = 0;
};

/// Buckets forwarded packets into fixed intervals and reports the mean count
/// per interval for each interface. Without a window, bucketing starts at the
/// earliest timestamp and covers every packet.
PacketOutHistogram packet_out_histogram(const PacketOutCounters& counters, double interval_s,
                                        std::optional<TimeWindow> window = std::nullopt);

struct TeidHash {
  std::size_t operator()(Teid t) const noexcept { return std::hash<std::uint32_t>{}(t.value); }
};

/// The observation/action channels shared by the datapath and the agent.
///
/// Two parties use it: the datapath writes the round-trip map and packet
/// counters and reads the action map; the agent reads the round-trip map and
/// writes the action map. Each map has its own lock, so readers always see a
/// fully committed value and either side can run on its own thread.
class SharedMaps {
 public:
  /// TEID-correlated round trip: the first event for a TEID arms the entry,
  /// the next one closes the pair and yields now - ts_request.
  /// Throws ClockSkew when now precedes the armed request; the in-flight
  /// measurement is dropped and the entry re-armed at `now_ns`.
  /// A timestamp of 0 is reserved for "not armed" and rejected.
  std::optional<std::uint64_t> measure_rtt(Teid teid, std::uint64_t now_ns);

  /// Egress lookup for a packet of `teid`, n6a when the agent never wrote one.
  Interface forward(Teid teid, std::uint64_t now_ns);

  /// Latest delay proxy; nullopt until the first completed pairing.
  std::optional<Observation> read_observation(Teid teid) const;

  void write_action(Teid teid, Interface action);
  /// Raw map write as a userspace agent would issue it; ids other than 0/1
  /// are rejected.
  void write_action(Teid teid, std::uint32_t interface_id);

  std::optional<RoundTripEntry> rtt_entry(Teid teid) const;
  PacketOutCounters packet_out() const;
  std::uint64_t forwarded_total() const;

  /// CSV dump of the round-trip map sorted by TEID: teid,last_rtt_ns,count
  void dump_rtt_csv(std::ostream& out) const;

 private:
  mutable std::mutex rtt_mutex_;
  std::unordered_map<Teid, RoundTripEntry, TeidHash> rtt_map_;

  mutable std::mutex action_mutex_;
  std::unordered_map<Teid, Interface, TeidHash> action_map_;

  mutable std::mutex counter_mutex_;
  PacketOutCounters counters_;
};

enum class Direction : std::uint8_t { kRequest, kResponse };

struct PacketEvent {
  std::span<const std::uint8_t> raw_header;
  std::uint64_t timestamp_ns = 0;
  Direction direction = Direction::kRequest;
};

struct PacketVerdict {
  Teid teid;
  std::optional<Interface> egress;           // set for uplink requests
  std::optional<std::uint64_t> measured_ns;  // set when the event closed a pair
};

/// Simulated UPF packet hook: extracts the TEID, runs the round-trip
/// correlation and, for uplink requests, steers the packet per the action
/// map.
class Datapath {
 public:
  explicit Datapath(SharedMaps& maps) : maps_(maps) {}

  PacketVerdict process(const PacketEvent& event);

 private:
  SharedMaps& maps_;
};

}  // namespace eupf::dp
