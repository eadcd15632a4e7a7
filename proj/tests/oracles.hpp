/*
 * SPDX-License-Identifier: Apache-2.0
 * Copyright 2026 The eupf Authors
 */
// Reference implementations used only by tests. They share no code path with
// the library routines they check.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "eupf/qnet.hpp"

namespace eupf::oracle {

/// Pairs consecutive events of the same TEID: event 2k+1 closes the pair
/// opened by event 2k. Returns the per-event measurement (nullopt when the
/// event opens a pair).
inline std::vector<std::optional<std::uint64_t>> alternating_pairs(
    const std::vector<std::pair<std::uint32_t, std::uint64_t>>& events) {
  std::map<std::uint32_t, std::vector<std::uint64_t>> history;
  std::vector<std::optional<std::uint64_t>> out;
  out.reserve(events.size());
  for (const auto& [teid, ts] : events) {
    auto& h = history[teid];
    h.push_back(ts);
    if (h.size() % 2 == 0) {
      out.emplace_back(h[h.size() - 1] - h[h.size() - 2]);
    } else {
      out.emplace_back(std::nullopt);
    }
  }
  return out;
}

/// Plain nested-loop evaluation of the 3-layer ReLU MLP from its parameter
/// views.
inline std::array<double, 2> mlp_eval(const nn::QNetwork& net, double s) {
  std::vector<double> x{s};
  for (std::size_t l = 0; l < nn::QNetwork::kLayers; ++l) {
    const auto shape = net.shape(l);
    const auto w = net.weights(l);
    const auto b = net.bias(l);
    std::vector<double> y(shape.outputs);
    for (std::size_t o = 0; o < shape.outputs; ++o) {
      double acc = b[o];
      for (std::size_t i = 0; i < shape.inputs; ++i) acc += w[o * shape.inputs + i] * x[i];
      y[o] = (l + 1 < nn::QNetwork::kLayers) ? std::max(acc, 0.0) : acc;
    }
    x = std::move(y);
  }
  return {x[0], x[1]};
}

inline double mse_loss(const nn::QNetwork& net, const nn::TrainBatch& batch) {
  double sum = 0.0;
  for (std::size_t j = 0; j < batch.size(); ++j) {
    const double e = mlp_eval(net, batch.states[j])[batch.actions[j]] - batch.targets[j];
    sum += e * e;
  }
  return sum / static_cast<double>(batch.size());
}

/// Central differences of the batch loss with respect to every parameter.
inline std::vector<double> finite_difference_gradient(const nn::QNetwork& net, const nn::TrainBatch& batch,
                                                      double h) {
  nn::QNetwork probe = net;
  auto params = probe.parameters();
  std::vector<double> grad(params.size());
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double saved = params[i];
    params[i] = saved + h;
    const double up = mse_loss(probe, batch);
    params[i] = saved - h;
    const double down = mse_loss(probe, batch);
    params[i] = saved;
    grad[i] = (up - down) / (2.0 * h);
  }
  return grad;
}

/// Smallest |pre-activation| over every hidden unit and sample. Central
/// differences are only meaningful when no ReLU kink lies within reach of
/// the perturbation.
inline double min_hidden_margin(const nn::QNetwork& net, const nn::TrainBatch& batch) {
  double margin = INFINITY;
  for (double s : batch.states) {
    std::vector<double> x{s};
    for (std::size_t l = 0; l + 1 < nn::QNetwork::kLayers; ++l) {
      const auto shape = net.shape(l);
      const auto w = net.weights(l);
      const auto b = net.bias(l);
      std::vector<double> y(shape.outputs);
      for (std::size_t o = 0; o < shape.outputs; ++o) {
        double acc = b[o];
        for (std::size_t i = 0; i < shape.inputs; ++i) acc += w[o * shape.inputs + i] * x[i];
        margin = std::min(margin, std::abs(acc));
        y[o] = std::max(acc, 0.0);
      }
      x = std::move(y);
    }
  }
  return margin;
}

inline double relative_error(double analytic, double numeric) {
  return std::abs(analytic - numeric) / std::max({std::abs(analytic), std::abs(numeric), 1e-8});
}

struct GradientCheck {
  double max_relative_error = 0.0;
  std::size_t cases = 0;
};

/// Random reduced networks with random biases and random batches; samples
/// with a ReLU kink closer than `min_margin` are redrawn.
inline GradientCheck random_gradient_check(std::uint64_t seed, std::size_t cases, std::size_t hidden, double h,
                                           double min_margin = 0.05) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_int_distribution<std::size_t> batch_len(1, 8);
  std::uniform_int_distribution<int> action(0, 1);
  GradientCheck result;
  while (result.cases < cases) {
    nn::QNetwork net = nn::QNetwork::initialized(rng, hidden, hidden);
    for (std::size_t l = 0; l < nn::QNetwork::kLayers; ++l) {
      for (double& b : net.bias(l)) b = 0.3 * unit(rng);
    }
    nn::TrainBatch batch;
    const std::size_t n = batch_len(rng);
    for (std::size_t j = 0; j < n; ++j) {
      batch.states.push_back(0.5 * (unit(rng) + 1.0));
      batch.actions.push_back(static_cast<std::uint8_t>(action(rng)));
      batch.targets.push_back(2.0 * unit(rng));
    }
    if (min_hidden_margin(net, batch) < min_margin) continue;

    std::vector<double> analytic(net.parameter_count());
    nn::loss_and_gradient(net, batch, analytic);
    const auto numeric = finite_difference_gradient(net, batch, h);
    for (std::size_t i = 0; i < analytic.size(); ++i) {
      result.max_relative_error = std::max(result.max_relative_error, relative_error(analytic[i], numeric[i]));
    }
    ++result.cases;
  }
  return result;
}

}  // namespace eupf::oracle
