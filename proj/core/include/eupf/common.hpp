/*
 * SPDX-License-Identifier: Apache-2.0
 * Copyright 2026 The eupf Authors
 */
#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>

namespace eupf {

/// N6 egress interface of the UPF. n6a reaches the MEC host, n6b the cloud.
enum class Interface : std::uint8_t { kN6a = 0, kN6b = 1 };

inline constexpr std::size_t kInterfaceCount = 2;

constexpr std::size_t index_of(Interface iface) { return static_cast<std::size_t>(iface); }

std::string_view to_string(Interface iface);

/// Throws InvalidArgument for anything other than 0 or 1.
Interface interface_from_index(std::uint32_t index);

/// Accepts "n6a" / "n6b".
Interface parse_interface(std::string_view name);

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

using Rng = std::mt19937_64;

/// Derives an independent generator for a named purpose from one root seed.
/// Streams with different names never share a seed sequence, so adding draws
/// to one component leaves the others untouched.
Rng make_stream(std::uint64_t root_seed, std::string_view stream_name);

std::uint64_t derive_seed(std::uint64_t root_seed, std::string_view stream_name);

}  // namespace eupf
