// Copyright 2026 The textrl Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "textrl/agent/q_network.hpp"

#include "textrl/errors.hpp"

namespace textrl {
namespace arch = architecture;

namespace {

void CheckFinite(std::span<const double> values, const char* layer) {
  if (!AllFinite(values)) throw NumericError(std::string("non-finite activation in ") + layer);
}

}  // namespace

void AggregateDueling(DuelingMode mode, std::size_t batch, std::size_t actions,
                      std::span<const double> value, std::span<const double> advantage,
                      std::span<double> q) {
  for (std::size_t b = 0; b < batch; ++b) {
    const double* a = advantage.data() + b * actions;
    double mean = 0.0;
    if (mode == DuelingMode::kMeanCentered) {
      for (std::size_t k = 0; k < actions; ++k) mean += a[k];
      mean /= static_cast<double>(actions);
    }
    for (std::size_t k = 0; k < actions; ++k) q[b * actions + k] = value[b] + (a[k] - mean);
  }
}

void AggregateDuelingBackward(DuelingMode mode, std::size_t batch, std::size_t actions,
                              std::span<const double> d_q, std::span<double> d_value,
                              std::span<double> d_advantage) {
  for (std::size_t b = 0; b < batch; ++b) {
    const double* g = d_q.data() + b * actions;
    double total = 0.0;
    for (std::size_t k = 0; k < actions; ++k) total += g[k];
    d_value[b] = total;
    const double shift = mode == DuelingMode::kMeanCentered ? total / static_cast<double>(actions)
                                                            : 0.0;
    for (std::size_t k = 0; k < actions; ++k) d_advantage[b * actions + k] = g[k] - shift;
  }
}

std::uint64_t QNetwork::Cache::RegimeHash() const {
  std::uint64_t hash = 1469598103934665603ull;  // FNV-1a
  auto mix = [&](const Buffer& layer) {
    for (double v : layer) {
      hash ^= v > 0.0 ? 1u : 0u;
      hash *= 1099511628211ull;
    }
  };
  mix(conv1);
  mix(conv2);
  mix(conv3);
  mix(conv4);
  mix(value1);
  mix(value2);
  mix(advantage1);
  mix(advantage2);
  return hash;
}

QNetwork::QNetwork(const QNetworkConfig& config)
    : config_(config),
      conv1_("conv1", arch::kConv1),
      conv2_("conv2", arch::kConv2),
      conv3_("conv3", arch::kConv3),
      conv4_("conv4", arch::kConv4),
      lstm_("lstm", arch::kRecurrentUnits, arch::kRecurrentUnits),
      value1_("value1", arch::kRecurrentUnits, arch::kStreamHidden1),
      value2_("value2", arch::kStreamHidden1, arch::kStreamHidden2),
      value_out_("value_out", arch::kStreamHidden2, 1),
      advantage1_("advantage1", arch::kRecurrentUnits, arch::kStreamHidden1),
      advantage2_("advantage2", arch::kStreamHidden1, arch::kStreamHidden2),
      advantage_out_("advantage_out", arch::kStreamHidden2, config.num_actions()) {
  if (config.classes < 2) throw UsageError("need at least 2 classes");
  if (config.move_actions < 1 || config.move_actions > 2) {
    throw UsageError("move_actions must be 1 or 2");
  }
}

void QNetwork::Initialize(Rng& rng) {
  conv1_.InitializeHe(rng);
  conv2_.InitializeHe(rng);
  conv3_.InitializeHe(rng);
  conv4_.InitializeHe(rng);
  lstm_.InitializeUniform(rng);
  value1_.InitializeHe(rng);
  value2_.InitializeHe(rng);
  value_out_.InitializeLinear(rng);
  advantage1_.InitializeHe(rng);
  advantage2_.InitializeHe(rng);
  advantage_out_.InitializeLinear(rng);
}

void QNetwork::Forward(std::size_t batch, std::span<const double> obs, std::span<const double> h,
                       std::span<const double> c, std::span<double> q, std::span<double> h_out,
                       std::span<double> c_out, Cache* cache) const {
  const std::size_t units = arch::kRecurrentUnits, actions = num_actions();
  if (obs.size() != batch * arch::kObservationSize || h.size() != batch * units ||
      c.size() != batch * units || q.size() != batch * actions ||
      h_out.size() != batch * units || c_out.size() != batch * units) {
    throw ShapeError("QNetwork::Forward: buffer sizes do not match batch " +
                     std::to_string(batch));
  }
  Cache local;
  Cache& k = cache ? *cache : local;
  k.batch = batch;
  k.input.assign(obs.begin(), obs.end());
  k.h_in.assign(h.begin(), h.end());
  k.c_in.assign(c.begin(), c.end());

  auto conv = [&](const Conv2D& layer, std::span<const double> in, Buffer& out,
                  const char* name) {
    out.resize(batch * layer.geometry().output_size());
    layer.Forward(batch, in, out, backend_);
    CheckFinite(out, name);  // before ReLU, which would map NaN to zero
    parallel::ReluInPlace(out);
  };
  conv(conv1_, k.input, k.conv1, "conv1");
  conv(conv2_, k.conv1, k.conv2, "conv2");
  conv(conv3_, k.conv2, k.conv3, "conv3");
  conv(conv4_, k.conv3, k.conv4, "conv4");

  k.h_out.resize(batch * units);
  k.c_out.resize(batch * units);
  lstm_.Forward(batch, k.conv4, k.h_in, k.c_in, k.h_out, k.c_out, k.lstm, backend_);
  CheckFinite(k.h_out, "lstm");
  CheckFinite(k.c_out, "lstm");

  auto dense = [&](const Dense& layer, std::span<const double> in, Buffer& out,
                   bool relu, const char* name) {
    out.resize(batch * layer.out());
    layer.Forward(batch, in, out, backend_);
    CheckFinite(out, name);
    if (relu) parallel::ReluInPlace(out);
  };
  dense(value1_, k.h_out, k.value1, true, "value1");
  dense(value2_, k.value1, k.value2, true, "value2");
  dense(value_out_, k.value2, k.value, false, "value_out");
  dense(advantage1_, k.h_out, k.advantage1, true, "advantage1");
  dense(advantage2_, k.advantage1, k.advantage2, true, "advantage2");
  dense(advantage_out_, k.advantage2, k.advantage, false, "advantage_out");

  AggregateDueling(config_.dueling, batch, actions, k.value, k.advantage, q);
  std::copy(k.h_out.begin(), k.h_out.end(), h_out.begin());
  std::copy(k.c_out.begin(), k.c_out.end(), c_out.begin());
}

void QNetwork::Backward(const Cache& k, std::span<const double> d_q) {
  const std::size_t batch = k.batch, actions = num_actions(), units = arch::kRecurrentUnits;
  if (d_q.size() != batch * actions) throw ShapeError("QNetwork::Backward: d_q size mismatch");

  Buffer d_value(batch), d_advantage(batch * actions);
  AggregateDuelingBackward(config_.dueling, batch, actions, d_q, d_value, d_advantage);

  // Streams, back to the shared LSTM output.
  Buffer d_h(batch * units, 0.0);
  auto stream = [&](Dense& l1, Dense& l2, Dense& out, const Buffer& a1,
                    const Buffer& a2, std::span<const double> d_top) {
    Buffer d2(batch * l2.out()), d1(batch * l1.out()), dh(batch * units);
    out.Backward(batch, a2, d_top, d2, backend_);
    parallel::ReluBackwardInPlace(a2, d2);
    l2.Backward(batch, a1, d2, d1, backend_);
    parallel::ReluBackwardInPlace(a1, d1);
    l1.Backward(batch, k.h_out, d1, dh, backend_);
    for (std::size_t i = 0; i < dh.size(); ++i) d_h[i] += dh[i];
  };
  stream(value1_, value2_, value_out_, k.value1, k.value2, d_value);
  stream(advantage1_, advantage2_, advantage_out_, k.advantage1, k.advantage2, d_advantage);

  Buffer d_conv4(batch * units);
  lstm_.Backward(batch, k.conv4, k.h_in, k.c_in, k.lstm, d_h, {}, d_conv4, {}, {}, backend_);

  parallel::ReluBackwardInPlace(k.conv4, d_conv4);
  Buffer d_conv3(k.conv3.size());
  conv4_.Backward(batch, k.conv3, d_conv4, d_conv3, backend_);
  parallel::ReluBackwardInPlace(k.conv3, d_conv3);
  Buffer d_conv2(k.conv2.size());
  conv3_.Backward(batch, k.conv2, d_conv3, d_conv2, backend_);
  parallel::ReluBackwardInPlace(k.conv2, d_conv2);
  Buffer d_conv1(k.conv1.size());
  conv2_.Backward(batch, k.conv1, d_conv2, d_conv1, backend_);
  parallel::ReluBackwardInPlace(k.conv1, d_conv1);
  conv1_.Backward(batch, k.input, d_conv1, {}, backend_);
}

std::vector<Parameter*> QNetwork::Parameters() {
  std::vector<Parameter*> out;
  auto add = [&](std::vector<Parameter*> ps) { out.insert(out.end(), ps.begin(), ps.end()); };
  add(conv1_.Parameters());
  add(conv2_.Parameters());
  add(conv3_.Parameters());
  add(conv4_.Parameters());
  add(lstm_.Parameters());
  add(value1_.Parameters());
  add(value2_.Parameters());
  add(value_out_.Parameters());
  add(advantage1_.Parameters());
  add(advantage2_.Parameters());
  add(advantage_out_.Parameters());
  return out;
}

std::vector<const Parameter*> QNetwork::Parameters() const {
  auto mutable_params = const_cast<QNetwork*>(this)->Parameters();
  return {mutable_params.begin(), mutable_params.end()};
}

void QNetwork::ZeroGrad() {
  for (Parameter* p : Parameters()) p->ZeroGrad();
}

void QNetwork::CopyParametersFrom(const QNetwork& other) {
  if (other.num_actions() != num_actions()) {
    throw ShapeError("cannot sync networks with " + std::to_string(other.num_actions()) +
                     " and " + std::to_string(num_actions()) + " actions");
  }
  auto dst = Parameters();
  auto src = other.Parameters();
  for (std::size_t i = 0; i < dst.size(); ++i) {
    if (dst[i]->name != src[i]->name || dst[i]->shape() != src[i]->shape()) {
      throw ShapeError("parameter mismatch: " + dst[i]->name + " vs " + src[i]->name);
    }
    dst[i]->value.data = src[i]->value.data;
  }
  config_.dueling = other.config_.dueling;
}

QOutput ForwardQ(const QNetwork& net, const Observation& obs, const RecurrentState& state) {
  if (obs.window.size() != arch::kObservationSize || obs.feature_dim != arch::kFeatureWidth) {
    throw ShapeError("observation must be " + std::to_string(arch::kWindow) + "x" +
                     std::to_string(arch::kFeatureWidth) + ", got feature width " +
                     std::to_string(obs.feature_dim));
  }
  if (state.h.size() != arch::kRecurrentUnits || state.c.size() != arch::kRecurrentUnits) {
    throw ShapeError("recurrent state must have " + std::to_string(arch::kRecurrentUnits) +
                     " units");
  }
  QOutput out{std::vector<double>(net.num_actions()), RecurrentState::Zero()};
  net.Forward(1, obs.window, state.h, state.c, out.q, out.next.h, out.next.c);
  return out;
}

}  // namespace textrl
