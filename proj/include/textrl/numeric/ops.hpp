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

// Single-sample tensor-level entry points for the layer kernels, with shape
// validation. The network itself calls the batched kernels directly.

#include <cstddef>

#include "textrl/numeric/kernels.hpp"
#include "textrl/numeric/tensor.hpp"

namespace textrl::ops {

struct Stride {
  std::size_t h = 1;
  std::size_t w = 1;
};

// input [H, W, Cin], kernel [kh, kw, Cin, Cout] -> [H', W', Cout]
Tensor Conv2d(const Tensor& input, const Tensor& kernel, Stride stride = {}, Padding pad = {});

struct Conv2dGrads {
  Tensor d_input;
  Tensor d_kernel;
};
Conv2dGrads Conv2dBackward(const Tensor& input, const Tensor& kernel, const Tensor& d_output,
                           Stride stride = {}, Padding pad = {});

// x [n], weight [n, m], bias [m] -> [m]
Tensor Dense(const Tensor& x, const Tensor& weight, const Tensor& bias);

struct DenseGrads {
  Tensor d_x;
  Tensor d_weight;
  Tensor d_bias;
};
DenseGrads DenseBackward(const Tensor& x, const Tensor& weight, const Tensor& d_y);

struct LstmWeights {
  Tensor weight;  // [n + m, 4m], gate columns i, f, o, g
  Tensor bias;    // [4m]
};

struct LstmState {
  Tensor h;
  Tensor c;
};

LstmState LstmStep(const Tensor& x, const LstmState& state, const LstmWeights& weights);

struct LstmGrads {
  Tensor d_x;
  Tensor d_h;
  Tensor d_c;
  Tensor d_weight;
  Tensor d_bias;
};
// Recomputes the forward step, then backpropagates (d_h_out, d_c_out).
LstmGrads LstmStepBackward(const Tensor& x, const LstmState& state, const LstmWeights& weights,
                           const Tensor& d_h_out, const Tensor& d_c_out);

}  // namespace textrl::ops
