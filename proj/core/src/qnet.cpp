/*
 * SPDX-License-Identifier: Apache-2.0
 * Copyright 2026 The eupf Authors
 */
#include "eupf/qnet.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace eupf::nn {

QNetwork::QNetwork(std::size_t hidden1, std::size_t hidden2)
    : widths_{kInputs, hidden1, hidden2, kOutputs} {
  if (hidden1 == 0 || hidden2 == 0) throw InvalidArgument("hidden layers need at least one unit");
  std::size_t offset = 0;
  for (std::size_t l = 0; l < kLayers; ++l) {
    offsets_[l] = offset;
    offset += widths_[l] * widths_[l + 1] + widths_[l + 1];
  }
  params_.assign(offset, 0.0);
}

QNetwork QNetwork::initialized(Rng& rng, std::size_t hidden1, std::size_t hidden2) {
  QNetwork net(hidden1, hidden2);
  for (std::size_t l = 0; l < kLayers; ++l) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(net.widths_[l]));
    std::uniform_real_distribution<double> dist(-bound, bound);
    for (double& w : net.weights(l)) w = dist(rng);
  }
  return net;
}

std::size_t QNetwork::bias_offset(std::size_t layer) const {
  return offsets_[layer] + widths_[layer] * widths_[layer + 1];
}

LayerShape QNetwork::shape(std::size_t layer) const { return {widths_.at(layer), widths_.at(layer + 1)}; }

std::span<double> QNetwork::weights(std::size_t layer) {
  return {params_.data() + weight_offset(layer), widths_.at(layer) * widths_.at(layer + 1)};
}
std::span<const double> QNetwork::weights(std::size_t layer) const {
  return {params_.data() + weight_offset(layer), widths_.at(layer) * widths_.at(layer + 1)};
}
std::span<double> QNetwork::bias(std::size_t layer) {
  return {params_.data() + bias_offset(layer), widths_.at(layer + 1)};
}
std::span<const double> QNetwork::bias(std::size_t layer) const {
  return {params_.data() + bias_offset(layer), widths_.at(layer + 1)};
}

namespace {

// out = W x + b
void affine(std::span<const double> w, std::span<const double> b, std::span<const double> x,
            std::span<double> out) {
  const std::size_t n_in = x.size();
  for (std::size_t o = 0; o < out.size(); ++o) {
    const double* row = w.data() + o * n_in;
    double acc = b[o];
    for (std::size_t i = 0; i < n_in; ++i) acc += row[i] * x[i];
    out[o] = acc;
  }
}

void relu_into(std::span<const double> z, std::span<double> a) {
  for (std::size_t i = 0; i < z.size(); ++i) a[i] = z[i] > 0.0 ? z[i] : 0.0;
}

struct Activations {
  std::vector<double> z1, a1, z2, a2;
  std::array<double, QNetwork::kOutputs> q{};

  explicit Activations(const QNetwork& net)
      : z1(net.shape(0).outputs), a1(net.shape(0).outputs), z2(net.shape(1).outputs), a2(net.shape(1).outputs) {}
};

void run_forward(const QNetwork& net, double state, Activations& act) {
  const std::array<double, 1> input{state};
  affine(net.weights(0), net.bias(0), input, act.z1);
  relu_into(act.z1, act.a1);
  affine(net.weights(1), net.bias(1), act.a1, act.z2);
  relu_into(act.z2, act.a2);
  affine(net.weights(2), net.bias(2), act.a2, act.q);
}

}  // namespace

std::array<double, QNetwork::kOutputs> QNetwork::forward(double state) const {
  if (!std::isfinite(state)) throw InvalidArgument("Q-network input must be finite");
  Activations act(*this);
  run_forward(*this, state, act);
  return act.q;
}

std::uint64_t QNetwork::fingerprint() const {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  auto mix = [&hash](std::uint64_t word) {
    for (int i = 0; i < 8; ++i) {
      hash ^= (word >> (8 * i)) & 0xff;
      hash *= 0x100000001b3ULL;
    }
  };
  for (std::size_t w : widths_) mix(w);
  for (double p : params_) {
    std::uint64_t bits;
    std::memcpy(&bits, &p, sizeof bits);
    mix(bits);
  }
  return hash;
}

void QNetwork::save(std::ostream& out) const {
  out << kCheckpointMagic << '\n';
  out << fmt::format("widths {} {} {} {}\n", widths_[0], widths_[1], widths_[2], widths_[3]);
  out << "params " << params_.size() << '\n';
  for (double p : params_) out << fmt::format("{}\n", p);
}

QNetwork QNetwork::load(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCheckpointMagic) {
    throw InvalidArgument("not a Q-network checkpoint (bad magic)");
  }
  std::string tag;
  std::array<std::size_t, kLayers + 1> widths{};
  if (!(in >> tag) || tag != "widths") throw InvalidArgument("checkpoint: missing widths");
  for (auto& w : widths) {
    if (!(in >> w)) throw InvalidArgument("checkpoint: malformed widths");
  }
  if (widths[0] != kInputs || widths[3] != kOutputs) {
    throw InvalidArgument("checkpoint: network must map 1 input to 2 outputs");
  }
  QNetwork net(widths[1], widths[2]);
  std::size_t count = 0;
  if (!(in >> tag >> count) || tag != "params") throw InvalidArgument("checkpoint: missing params");
  if (count != net.params_.size()) throw InvalidArgument("checkpoint: parameter count does not match widths");
  for (double& p : net.params_) {
    std::string token;
    if (!(in >> token)) throw InvalidArgument("checkpoint: truncated parameters");
    try {
      std::size_t used = 0;
      p = std::stod(token, &used);
      if (used != token.size()) throw std::invalid_argument(token);
    } catch (const std::exception&) {
      throw InvalidArgument("checkpoint: bad parameter value '" + token + "'");
    }
  }
  return net;
}

QNetwork QNetwork::load(std::istream& in, const std::array<std::size_t, kLayers + 1>& expected) {
  QNetwork net = load(in);
  if (net.widths_ != expected) {
    throw InvalidArgument(fmt::format("checkpoint shape {}x{}x{}x{} does not match expected {}x{}x{}x{}",
                                      net.widths_[0], net.widths_[1], net.widths_[2], net.widths_[3],
                                      expected[0], expected[1], expected[2], expected[3]));
  }
  return net;
}

AdamState AdamState::for_network(const QNetwork& net, double learning_rate) {
  AdamState s;
  s.learning_rate = learning_rate;
  s.first_moment.assign(net.parameter_count(), 0.0);
  s.second_moment.assign(net.parameter_count(), 0.0);
  return s;
}

void TrainBatch::validate() const {
  if (states.empty()) throw InvalidArgument("training batch is empty");
  if (actions.size() != states.size() || targets.size() != states.size()) {
    throw InvalidArgument("training batch sequences differ in length");
  }
  for (std::size_t j = 0; j < states.size(); ++j) {
    if (actions[j] > 1) throw InvalidArgument("action index out of range");
    if (!std::isfinite(states[j]) || !std::isfinite(targets[j])) {
      throw InvalidArgument("training batch holds a non-finite value");
    }
  }
}

std::vector<double> td_targets(std::span<const double> rewards, std::span<const double> next_states,
                               const QNetwork& target, double gamma) {
  if (rewards.size() != next_states.size()) throw InvalidArgument("rewards and next states differ in length");
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw InvalidArgument("gamma must lie in [0, 1]");
  std::vector<double> out(rewards.size());
  for (std::size_t j = 0; j < rewards.size(); ++j) {
    double bootstrap = 0.0;
    if (gamma != 0.0) {
      const auto q = target.forward(next_states[j]);
      bootstrap = gamma * std::max(q[0], q[1]);
    }
    out[j] = rewards[j] + bootstrap;
  }
  return out;
}

double loss_and_gradient(const QNetwork& net, const TrainBatch& batch, std::span<double> gradient) {
  batch.validate();
  if (gradient.size() != net.parameter_count()) throw InvalidArgument("gradient buffer has wrong size");
  std::fill(gradient.begin(), gradient.end(), 0.0);

  // Views into `gradient` laid out like the parameters.
  auto slice = [&](std::span<const double> param_view) {
    const auto offset = static_cast<std::size_t>(param_view.data() - net.parameters().data());
    return gradient.subspan(offset, param_view.size());
  };
  auto gw1 = slice(net.weights(0)), gb1 = slice(net.bias(0));
  auto gw2 = slice(net.weights(1)), gb2 = slice(net.bias(1));
  auto gw3 = slice(net.weights(2)), gb3 = slice(net.bias(2));
  const auto w2 = net.weights(1);
  const auto w3 = net.weights(2);
  const std::size_t h1 = net.shape(0).outputs;
  const std::size_t h2 = net.shape(1).outputs;

  Activations act(net);
  std::vector<double> dz2(h2), dz1(h1);
  const double n = static_cast<double>(batch.size());
  double loss = 0.0;

  for (std::size_t j = 0; j < batch.size(); ++j) {
    const double s = batch.states[j];
    const std::size_t a = batch.actions[j];
    run_forward(net, s, act);
    const double err = act.q[a] - batch.targets[j];
    loss += err * err;
    const double g = 2.0 * err / n;  // dL/dQ(s, a)

    gb3[a] += g;
    for (std::size_t k = 0; k < h2; ++k) {
      gw3[a * h2 + k] += g * act.a2[k];
      dz2[k] = act.z2[k] > 0.0 ? g * w3[a * h2 + k] : 0.0;
    }
    std::fill(dz1.begin(), dz1.end(), 0.0);
    for (std::size_t k = 0; k < h2; ++k) {
      if (dz2[k] == 0.0) continue;
      gb2[k] += dz2[k];
      const double* row = w2.data() + k * h1;
      double* grow = gw2.data() + k * h1;
      for (std::size_t m = 0; m < h1; ++m) {
        grow[m] += dz2[k] * act.a1[m];
        dz1[m] += dz2[k] * row[m];
      }
    }
    for (std::size_t m = 0; m < h1; ++m) {
      if (act.z1[m] <= 0.0) continue;
      gb1[m] += dz1[m];
      gw1[m] += dz1[m] * s;
    }
  }
  return loss / n;
}

double batch_loss(const QNetwork& net, const TrainBatch& batch) {
  batch.validate();
  double loss = 0.0;
  for (std::size_t j = 0; j < batch.size(); ++j) {
    const double err = net.forward(batch.states[j])[batch.actions[j]] - batch.targets[j];
    loss += err * err;
  }
  return loss / static_cast<double>(batch.size());
}

double train_step(QNetwork& net, AdamState& adam, const TrainBatch& batch) {
  const std::size_t n = net.parameter_count();
  if (adam.first_moment.size() != n || adam.second_moment.size() != n) {
    throw InvalidArgument("Adam moments do not match the network shape");
  }
  std::vector<double> grad(n);
  const double loss = loss_and_gradient(net, batch, grad);
  if (!std::isfinite(loss)) throw TrainingDivergence("non-finite TD loss");
  for (double g : grad) {
    if (!std::isfinite(g)) throw TrainingDivergence("non-finite gradient");
  }

  ++adam.step_count;
  const double t = static_cast<double>(adam.step_count);
  const double correction1 = 1.0 - std::pow(adam.beta1, t);
  const double correction2 = 1.0 - std::pow(adam.beta2, t);
  auto params = net.parameters();
  for (std::size_t i = 0; i < n; ++i) {
    double& m = adam.first_moment[i];
    double& v = adam.second_moment[i];
    m = adam.beta1 * m + (1.0 - adam.beta1) * grad[i];
    v = adam.beta2 * v + (1.0 - adam.beta2) * grad[i] * grad[i];
    const double m_hat = m / correction1;
    const double v_hat = v / correction2;
    params[i] -= adam.learning_rate * m_hat / (std::sqrt(v_hat) + adam.epsilon);
  }
  return loss;
}

}  // namespace eupf::nn
