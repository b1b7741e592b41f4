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

// Serial reference kernels against the OpenMP/Eigen kernels, per layer of the
// Q-network and for one full training update.

#include <benchmark/benchmark.h>

#include <vector>

#include "textrl/agent/q_network.hpp"
#include "textrl/numeric/adam.hpp"
#include "textrl/numeric/kernels.hpp"
#include "textrl/numeric/rng.hpp"

namespace textrl {
namespace {

constexpr std::size_t kBatch = 32;

std::vector<double> Random(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> v(n);
  for (double& x : v) x = UniformReal(rng, -1.0, 1.0);
  return v;
}

const Conv2DGeometry& Geometry(int layer) {
  static const Conv2DGeometry layers[] = {architecture::kConv1, architecture::kConv2,
                                          architecture::kConv3, architecture::kConv4};
  return layers[layer - 1];
}

template <bool kParallel>
void BM_ConvForward(benchmark::State& state) {
  const Conv2DGeometry& g = Geometry(static_cast<int>(state.range(0)));
  const auto input = Random(kBatch * g.input_size(), 1);
  const auto kernel = Random(g.kernel_size(), 2);
  const auto bias = Random(g.out_c, 3);
  std::vector<double> out(kBatch * g.output_size());
  for (auto _ : state) {
    if constexpr (kParallel) {
      parallel::Conv2DForward(g, kBatch, input, kernel, bias, out);
    } else {
      reference::Conv2DForward(g, kBatch, input, kernel, bias, out);
    }
    benchmark::DoNotOptimize(out.data());
  }
  state.counters["MAC/s"] = benchmark::Counter(
      static_cast<double>(kBatch * g.output_size() * g.patch_size()),
      benchmark::Counter::kIsIterationInvariantRate);
}
BENCHMARK(BM_ConvForward<false>)->Name("conv_forward/reference")->DenseRange(1, 4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ConvForward<true>)->Name("conv_forward/parallel")->DenseRange(1, 4)->Unit(benchmark::kMillisecond);

template <bool kParallel>
void BM_ConvBackward(benchmark::State& state) {
  const Conv2DGeometry& g = Geometry(static_cast<int>(state.range(0)));
  const auto input = Random(kBatch * g.input_size(), 1);
  const auto kernel = Random(g.kernel_size(), 2);
  const auto d_out = Random(kBatch * g.output_size(), 3);
  std::vector<double> d_in(kBatch * g.input_size()), d_kernel(g.kernel_size()), d_bias(g.out_c);
  for (auto _ : state) {
    if constexpr (kParallel) {
      parallel::Conv2DBackward(g, kBatch, input, kernel, d_out, d_in, d_kernel, d_bias);
    } else {
      reference::Conv2DBackward(g, kBatch, input, kernel, d_out, d_in, d_kernel, d_bias);
    }
    benchmark::DoNotOptimize(d_kernel.data());
  }
}
BENCHMARK(BM_ConvBackward<false>)->Name("conv_backward/reference")->DenseRange(1, 4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ConvBackward<true>)->Name("conv_backward/parallel")->DenseRange(1, 4)->Unit(benchmark::kMillisecond);

template <bool kParallel>
void BM_LstmForward(benchmark::State& state) {
  constexpr std::size_t units = architecture::kRecurrentUnits;
  const std::size_t batch = static_cast<std::size_t>(state.range(0));
  const auto x = Random(batch * units, 1), h = Random(batch * units, 2),
             c = Random(batch * units, 3);
  const auto weight = Random(2 * units * 4 * units, 4), bias = Random(4 * units, 5);
  std::vector<double> h_out(batch * units), c_out(batch * units), gates(batch * 4 * units),
      tanh_c(batch * units);
  for (auto _ : state) {
    if constexpr (kParallel) {
      parallel::LstmForward(batch, units, units, x, h, c, weight, bias, h_out, c_out,
                            {gates, tanh_c});
    } else {
      reference::LstmForward(batch, units, units, x, h, c, weight, bias, h_out, c_out,
                             {gates, tanh_c});
    }
    benchmark::DoNotOptimize(h_out.data());
  }
}
BENCHMARK(BM_LstmForward<false>)->Name("lstm_forward/reference")->Arg(1)->Arg(kBatch)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LstmForward<true>)->Name("lstm_forward/parallel")->Arg(1)->Arg(kBatch)->Unit(benchmark::kMillisecond);

// Forward + backward + Adam on a batch, i.e. one gradient update.
void BM_NetworkUpdate(benchmark::State& state) {
  QNetwork net(QNetworkConfig{3, 1});
  Rng rng(9);
  net.Initialize(rng);
  net.set_backend(state.range(0) ? KernelBackend::kParallel : KernelBackend::kReference);
  const std::size_t units = architecture::kRecurrentUnits, actions = net.num_actions();
  const auto obs = Random(kBatch * architecture::kObservationSize, 1);
  const auto h = Random(kBatch * units, 2), c = Random(kBatch * units, 3);
  const auto d_q = Random(kBatch * actions, 4);
  std::vector<double> q(kBatch * actions), h1(kBatch * units), c1(kBatch * units);
  QNetwork::Cache cache;
  auto params = net.Parameters();
  for (auto _ : state) {
    net.Forward(kBatch, obs, h, c, q, h1, c1, &cache);
    net.ZeroGrad();
    net.Backward(cache, d_q);
    AdamStep(params, 1e-4);
    benchmark::DoNotOptimize(q.data());
  }
}
BENCHMARK(BM_NetworkUpdate)->Name("network_update")->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace textrl

BENCHMARK_MAIN();
