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

#include "textrl/numeric/ops.hpp"

#include <vector>

#include "textrl/errors.hpp"

namespace textrl::ops {
namespace {

Conv2DGeometry GeometryFor(const Tensor& input, const Tensor& kernel, Stride stride, Padding pad) {
  if (input.rank() != 3 || kernel.rank() != 4) {
    throw ShapeError("conv2d expects input [H,W,Cin] and kernel [kh,kw,Cin,Cout], got input " +
                     ShapeString(input.shape) + " and kernel " + ShapeString(kernel.shape));
  }
  if (kernel.dim(2) != input.dim(2)) {
    throw ShapeError("conv2d channel mismatch: input " + ShapeString(input.shape) +
                     " has " + std::to_string(input.dim(2)) + " channels but kernel " +
                     ShapeString(kernel.shape) + " expects " + std::to_string(kernel.dim(2)));
  }
  Conv2DGeometry g{input.dim(0), input.dim(1), input.dim(2), kernel.dim(0), kernel.dim(1),
                   kernel.dim(3), stride.h, stride.w, pad};
  g.Validate();
  return g;
}

void RequireShape(const Tensor& t, const Shape& expected, const char* what) {
  if (t.shape != expected) {
    throw ShapeError(std::string(what) + ": expected " + ShapeString(expected) + ", got " +
                     ShapeString(t.shape));
  }
}

struct LstmDims {
  std::size_t n, m;
};

LstmDims CheckLstm(const Tensor& x, const LstmState& state, const LstmWeights& w) {
  if (x.rank() != 1 || state.h.rank() != 1) {
    throw ShapeError("lstm_step expects vector x and h, got " + ShapeString(x.shape) + " and " +
                     ShapeString(state.h.shape));
  }
  const std::size_t n = x.dim(0), m = state.h.dim(0);
  RequireShape(state.c, {m}, "lstm_step cell state");
  RequireShape(w.weight, {n + m, 4 * m}, "lstm_step weight");
  RequireShape(w.bias, {4 * m}, "lstm_step bias");
  return {n, m};
}

}  // namespace

Tensor Conv2d(const Tensor& input, const Tensor& kernel, Stride stride, Padding pad) {
  const auto g = GeometryFor(input, kernel, stride, pad);
  Tensor out({g.out_h(), g.out_w(), g.out_c});
  reference::Conv2DForward(g, 1, input.data, kernel.data, {}, out.data);
  return out;
}

Conv2dGrads Conv2dBackward(const Tensor& input, const Tensor& kernel, const Tensor& d_output,
                           Stride stride, Padding pad) {
  const auto g = GeometryFor(input, kernel, stride, pad);
  RequireShape(d_output, {g.out_h(), g.out_w(), g.out_c}, "conv2d output gradient");
  Conv2dGrads grads{Tensor(input.shape), Tensor(kernel.shape)};
  reference::Conv2DBackward(g, 1, input.data, kernel.data, d_output.data, grads.d_input.data,
                            grads.d_kernel.data, {});
  return grads;
}

Tensor Dense(const Tensor& x, const Tensor& weight, const Tensor& bias) {
  if (x.rank() != 1 || weight.rank() != 2 || weight.dim(0) != x.dim(0)) {
    throw ShapeError("dense: x " + ShapeString(x.shape) + " incompatible with weight " +
                     ShapeString(weight.shape));
  }
  RequireShape(bias, {weight.dim(1)}, "dense bias");
  Tensor y({weight.dim(1)});
  reference::DenseForward(1, x.dim(0), weight.dim(1), x.data, weight.data, bias.data, y.data);
  return y;
}

DenseGrads DenseBackward(const Tensor& x, const Tensor& weight, const Tensor& d_y) {
  if (x.rank() != 1 || weight.rank() != 2 || weight.dim(0) != x.dim(0)) {
    throw ShapeError("dense: x " + ShapeString(x.shape) + " incompatible with weight " +
                     ShapeString(weight.shape));
  }
  RequireShape(d_y, {weight.dim(1)}, "dense output gradient");
  DenseGrads g{Tensor(x.shape), Tensor(weight.shape), Tensor({weight.dim(1)})};
  reference::DenseBackward(1, x.dim(0), weight.dim(1), x.data, weight.data, d_y.data, g.d_x.data,
                           g.d_weight.data, g.d_bias.data);
  return g;
}

LstmState LstmStep(const Tensor& x, const LstmState& state, const LstmWeights& weights) {
  const auto [n, m] = CheckLstm(x, state, weights);
  LstmState next{Tensor({m}), Tensor({m})};
  std::vector<double> gates(4 * m), tanh_c(m);
  reference::LstmForward(1, n, m, x.data, state.h.data, state.c.data, weights.weight.data,
                         weights.bias.data, next.h.data, next.c.data, {gates, tanh_c});
  return next;
}

LstmGrads LstmStepBackward(const Tensor& x, const LstmState& state, const LstmWeights& weights,
                           const Tensor& d_h_out, const Tensor& d_c_out) {
  const auto [n, m] = CheckLstm(x, state, weights);
  RequireShape(d_h_out, {m}, "lstm_step hidden gradient");
  RequireShape(d_c_out, {m}, "lstm_step cell gradient");
  std::vector<double> gates(4 * m), tanh_c(m), h_out(m), c_out(m);
  reference::LstmForward(1, n, m, x.data, state.h.data, state.c.data, weights.weight.data,
                         weights.bias.data, h_out, c_out, {gates, tanh_c});
  LstmGrads g{Tensor({n}), Tensor({m}), Tensor({m}), Tensor(weights.weight.shape),
              Tensor(weights.bias.shape)};
  reference::LstmBackward(1, n, m, x.data, state.h.data, state.c.data, weights.weight.data, gates,
                          tanh_c, d_h_out.data, d_c_out.data, g.d_x.data, g.d_h.data, g.d_c.data,
                          g.d_weight.data, g.d_bias.data);
  return g;
}

}  // namespace textrl::ops
