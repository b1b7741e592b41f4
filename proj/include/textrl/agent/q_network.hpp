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

#pragma once

// Convolutional recurrent dueling Q-network.
//
//   window 5 x 105 x 1
//     conv1 2x5   stride 1x1, 32 filters          -> 4 x 101 x 32
//     conv2 2x5   stride 2x2, 64 filters          -> 2 x 49 x 64
//     conv3 2x10  stride 1x2, 64 filters, +1 zero column on the right
//                                                 -> 1 x 21 x 64
//     conv4 1x21  stride 1x1, 525 filters         -> 1 x 1 x 525
//   LSTM, 525 units
//   value stream      dense 256 -> 128 -> 1
//   advantage stream  dense 256 -> 128 -> K + M
//
// Convolutions and hidden dense layers are rectified; stream heads are linear.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "textrl/env/text_environment.hpp"
#include "textrl/numeric/layers.hpp"
#include "textrl/numeric/rng.hpp"

namespace textrl {

namespace architecture {

inline constexpr std::size_t kWindow = kWindowTokens;
inline constexpr std::size_t kFeatureWidth = 105;
inline constexpr std::size_t kObservationSize = kWindow * kFeatureWidth;
inline constexpr std::size_t kRecurrentUnits = 525;
inline constexpr std::size_t kStreamHidden1 = 256;
inline constexpr std::size_t kStreamHidden2 = 128;

inline constexpr Conv2DGeometry kConv1{kWindow, kFeatureWidth, 1, 2, 5, 32, 1, 1, {}};
inline constexpr Conv2DGeometry kConv2{4, 101, 32, 2, 5, 64, 2, 2, {}};
inline constexpr Conv2DGeometry kConv3{2, 49, 64, 2, 10, 64, 1, 2, {0, 0, 0, 1}};
inline constexpr Conv2DGeometry kConv4{1, 21, 64, 1, 21, kRecurrentUnits, 1, 1, {}};

static_assert(kConv1.out_h() == 4 && kConv1.out_w() == 101 && kConv1.out_c == 32);
static_assert(kConv2.in_h == kConv1.out_h() && kConv2.in_w == kConv1.out_w() &&
              kConv2.in_c == kConv1.out_c);
static_assert(kConv2.out_h() == 2 && kConv2.out_w() == 49);
static_assert(kConv3.in_h == kConv2.out_h() && kConv3.in_w == kConv2.out_w() &&
              kConv3.in_c == kConv2.out_c);
static_assert(kConv3.padded_w() == 50 && kConv3.out_h() == 1 && kConv3.out_w() == 21);
static_assert(kConv4.in_h == kConv3.out_h() && kConv4.in_w == kConv3.out_w() &&
              kConv4.in_c == kConv3.out_c);
static_assert(kConv4.output_size() == kRecurrentUnits, "conv stack must emit the LSTM input");

}  // namespace architecture

enum class DuelingMode {
  kMeanCentered,  // Q = V + (A - mean A)
  kNaiveSum,      // Q = V + A
};

struct QNetworkConfig {
  int classes = 3;
  std::size_t move_actions = 1;
  DuelingMode dueling = DuelingMode::kMeanCentered;

  std::size_t num_actions() const { return static_cast<std::size_t>(classes) + move_actions; }
};

struct RecurrentState {
  std::vector<double> h;
  std::vector<double> c;

  static RecurrentState Zero(std::size_t units = architecture::kRecurrentUnits) {
    return {std::vector<double>(units, 0.0), std::vector<double>(units, 0.0)};
  }
  friend bool operator==(const RecurrentState&, const RecurrentState&) = default;
};

// Combines stream outputs per sample: value [batch], advantage [batch, actions].
void AggregateDueling(DuelingMode mode, std::size_t batch, std::size_t actions,
                      std::span<const double> value, std::span<const double> advantage,
                      std::span<double> q);
// Gradient of the aggregation; writes d_value [batch] and d_advantage.
void AggregateDuelingBackward(DuelingMode mode, std::size_t batch, std::size_t actions,
                              std::span<const double> d_q, std::span<double> d_value,
                              std::span<double> d_advantage);

class QNetwork {
 public:
  // Intermediate activations of one batched forward pass.
  struct Cache {
    std::size_t batch = 0;
    Buffer input, h_in, c_in;
    Buffer conv1, conv2, conv3, conv4;  // rectified
    Buffer h_out, c_out;
    LstmCell::Cache lstm;
    Buffer value1, value2, advantage1, advantage2;  // rectified
    Buffer value, advantage;

    // Hash of every ReLU on/off bit; changes iff some unit crosses its kink.
    std::uint64_t RegimeHash() const;
  };

  explicit QNetwork(const QNetworkConfig& config = {});

  const QNetworkConfig& config() const { return config_; }
  std::size_t num_actions() const { return config_.num_actions(); }

  void Initialize(Rng& rng);

  // Batched forward pass. obs [batch, 525], h/c [batch, 525], q [batch, A].
  // Thread-safe on a const network when cache is null or thread-private.
  // Throws NumericError naming the first layer that produced NaN/Inf.
  void Forward(std::size_t batch, std::span<const double> obs, std::span<const double> h,
               std::span<const double> c, std::span<double> q, std::span<double> h_out,
               std::span<double> c_out, Cache* cache = nullptr) const;

  // Backpropagates d_q [batch, A] through the pass recorded in `cache`,
  // accumulating into parameter gradients. Recurrent-state inputs are treated
  // as constants.
  void Backward(const Cache& cache, std::span<const double> d_q);

  std::vector<Parameter*> Parameters();
  std::vector<const Parameter*> Parameters() const;
  void ZeroGrad();

  // Copies parameter values only. Throws ShapeError on structural mismatch.
  void CopyParametersFrom(const QNetwork& other);

  void set_backend(KernelBackend backend) { backend_ = backend; }
  KernelBackend backend() const { return backend_; }

 private:
  QNetworkConfig config_;
  KernelBackend backend_ = KernelBackend::kParallel;
  Conv2D conv1_, conv2_, conv3_, conv4_;
  LstmCell lstm_;
  Dense value1_, value2_, value_out_;
  Dense advantage1_, advantage2_, advantage_out_;
};

struct QOutput {
  std::vector<double> q;
  RecurrentState next;
};

// Single-observation forward. Throws ShapeError unless the window is 5 x 105
// and the recurrent state has 525 units.
QOutput ForwardQ(const QNetwork& net, const Observation& obs, const RecurrentState& state);

}  // namespace textrl
