/*
 * SPDX-License-Identifier: Apache-2.0
 * Copyright 2026 The eupf Authors
 */
#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "eupf/common.hpp"

namespace eupf::nn {

class TrainingDivergence : public Error {
 public:
  using Error::Error;
};

struct LayerShape {
  std::size_t inputs = 0;
  std::size_t outputs = 0;
};

/// Scalar-in, two-out MLP: Linear -> ReLU -> Linear -> ReLU -> Linear.
///
/// All parameters live in one flat buffer, layer by layer, weights first
/// (row-major, outputs x inputs) followed by the bias vector. Optimizer state
/// and gradients use the same layout.
class QNetwork {
 public:
  static constexpr std::size_t kInputs = 1;
  static constexpr std::size_t kOutputs = 2;
  static constexpr std::size_t kLayers = 3;
  static constexpr std::size_t kDefaultHidden = 64;

  /// All-zero parameters.
  explicit QNetwork(std::size_t hidden1 = kDefaultHidden, std::size_t hidden2 = kDefaultHidden);

  /// Weights ~ U(-1/sqrt(fan_in), +1/sqrt(fan_in)), biases zero.
  static QNetwork initialized(Rng& rng, std::size_t hidden1 = kDefaultHidden,
                              std::size_t hidden2 = kDefaultHidden);

  /// [Q(s, n6a), Q(s, n6b)]. Rejects a non-finite state.
  std::array<double, kOutputs> forward(double state) const;

  LayerShape shape(std::size_t layer) const;
  std::array<std::size_t, kLayers + 1> widths() const { return widths_; }
  bool same_shape(const QNetwork& other) const { return widths_ == other.widths_; }

  std::span<double> weights(std::size_t layer);
  std::span<const double> weights(std::size_t layer) const;
  std::span<double> bias(std::size_t layer);
  std::span<const double> bias(std::size_t layer) const;

  std::span<double> parameters() { return params_; }
  std::span<const double> parameters() const { return params_; }
  std::size_t parameter_count() const { return params_.size(); }

  /// Order-sensitive 64-bit hash over the raw parameter bits.
  std::uint64_t fingerprint() const;

  /// Text checkpoint: magic line, layer widths, then every parameter in
  /// round-trip precision.
  void save(std::ostream& out) const;
  /// Throws InvalidArgument on a bad magic, malformed body or, when
  /// `expected` is given, on a width mismatch.
  static QNetwork load(std::istream& in);
  static QNetwork load(std::istream& in, const std::array<std::size_t, kLayers + 1>& expected);

  friend bool operator==(const QNetwork&, const QNetwork&) = default;

 private:
  std::size_t weight_offset(std::size_t layer) const { return offsets_[layer]; }
  std::size_t bias_offset(std::size_t layer) const;

  std::array<std::size_t, kLayers + 1> widths_{};
  std::array<std::size_t, kLayers> offsets_{};
  std::vector<double> params_;
};

inline constexpr char kCheckpointMagic[] = "EUPF-QNET 1";

/// Adam with bias correction. Moments share the network's flat layout.
struct AdamState {
  double learning_rate = 5e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::uint64_t step_count = 0;
  std::vector<double> first_moment;
  std::vector<double> second_moment;

  static AdamState for_network(const QNetwork& net, double learning_rate = 5e-4);

  friend bool operator==(const AdamState&, const AdamState&) = default;
};

struct TrainBatch {
  std::vector<double> states;
  std::vector<std::uint8_t> actions;  // 0 = n6a, 1 = n6b
  std::vector<double> targets;

  std::size_t size() const { return states.size(); }
  void validate() const;
};

/// r_j + gamma * max_a' Q(s'_j, a'; target). Every transition bootstraps.
std::vector<double> td_targets(std::span<const double> rewards, std::span<const double> next_states,
                               const QNetwork& target, double gamma);

/// Mean squared TD error over the batch, gradients only through the taken
/// action's output. Writes dL/dtheta into `gradient` (same layout as the
/// parameters) and returns the loss.
double loss_and_gradient(const QNetwork& net, const TrainBatch& batch, std::span<double> gradient);

double batch_loss(const QNetwork& net, const TrainBatch& batch);

/// One Adam update on the mean squared TD error. Returns the loss measured
/// before the update. Throws TrainingDivergence on a non-finite loss or
/// gradient, leaving `net` and `adam` untouched.
double train_step(QNetwork& net, AdamState& adam, const TrainBatch& batch);

/// Independent deep copy for use as the target network.
inline QNetwork sync_target(const QNetwork& online) { return online; }

}  // namespace eupf::nn
