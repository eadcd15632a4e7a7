/*
 * SPDX-License-Identifier: Apache-2.0
 * Copyright 2026 The eupf Authors
 */
#include "eupf/common.hpp"

#include <array>

namespace eupf {

std::string_view to_string(Interface iface) {
  return iface == Interface::kN6a ? "n6a" : "n6b";
}

Interface interface_from_index(std::uint32_t index) {
  if (index > 1) {
    throw InvalidArgument("invalid interface id " + std::to_string(index));
  }
  return static_cast<Interface>(index);
}

Interface parse_interface(std::string_view name) {
  if (name == "n6a") return Interface::kN6a;
  if (name == "n6b") return Interface::kN6b;
  throw InvalidArgument("unknown interface '" + std::string(name) + "'");
}

namespace {

// FNV-1a, only used to turn a stream name into seed material.
std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t root_seed, std::string_view stream_name) {
  const std::uint64_t name_hash = fnv1a(stream_name);
  std::seed_seq seq{static_cast<std::uint32_t>(root_seed), static_cast<std::uint32_t>(root_seed >> 32),
                    static_cast<std::uint32_t>(name_hash), static_cast<std::uint32_t>(name_hash >> 32)};
  std::array<std::uint32_t, 2> out{};
  seq.generate(out.begin(), out.end());
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

Rng make_stream(std::uint64_t root_seed, std::string_view stream_name) {
  const std::uint64_t name_hash = fnv1a(stream_name);
  std::seed_seq seq{static_cast<std::uint32_t>(root_seed), static_cast<std::uint32_t>(root_seed >> 32),
                    static_cast<std::uint32_t>(name_hash), static_cast<std::uint32_t>(name_hash >> 32)};
  return Rng(seq);
}

}  // namespace eupf
