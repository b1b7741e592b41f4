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

// Batched compute kernels behind the layer kit.
//
// Two implementations share every signature: `reference` is plain serial
// loops written for readability and kept as the test oracle; `parallel` uses
// im2col + GEMM and OpenMP over independent outputs. Both operate on flat
// row-major buffers with an explicit leading batch dimension.
//
// Layouts:
//   conv input   [batch, in_h, in_w, in_c]
//   conv kernel  [k_h, k_w, in_c, out_c]
//   conv output  [batch, out_h, out_w, out_c]
//   dense x      [batch, in], W [in, out], y [batch, out]
//   lstm weights [(in + hidden), 4 * hidden], gate order i, f, o, g

#include <cstddef>
#include <span>

namespace textrl {

struct Padding {
  std::size_t top = 0;
  std::size_t bottom = 0;
  std::size_t left = 0;
  std::size_t right = 0;

  friend bool operator==(const Padding&, const Padding&) = default;
};

struct Conv2DGeometry {
  std::size_t in_h = 0;
  std::size_t in_w = 0;
  std::size_t in_c = 0;
  std::size_t k_h = 0;
  std::size_t k_w = 0;
  std::size_t out_c = 0;
  std::size_t stride_h = 1;
  std::size_t stride_w = 1;
  Padding pad{};

  constexpr std::size_t padded_h() const { return in_h + pad.top + pad.bottom; }
  constexpr std::size_t padded_w() const { return in_w + pad.left + pad.right; }
  constexpr std::size_t out_h() const { return (padded_h() - k_h) / stride_h + 1; }
  constexpr std::size_t out_w() const { return (padded_w() - k_w) / stride_w + 1; }
  constexpr std::size_t patch_size() const { return k_h * k_w * in_c; }
  constexpr std::size_t input_size() const { return in_h * in_w * in_c; }
  constexpr std::size_t output_size() const { return out_h() * out_w() * out_c; }
  constexpr std::size_t kernel_size() const { return patch_size() * out_c; }

  // Throws ShapeError if the kernel does not fit or strides are zero.
  void Validate() const;
};

// Per-batch scratch for one LSTM step, filled by the forward kernel and read by
// the backward kernel. `gates` holds activated i, f, o, g.
struct LstmStepBuffers {
  std::span<double> gates;   // [batch, 4 * hidden]
  std::span<double> tanh_c;  // [batch, hidden]
};

namespace reference {

void Conv2DForward(const Conv2DGeometry& g, std::size_t batch,
                   std::span<const double> input, std::span<const double> kernel,
                   std::span<const double> bias, std::span<double> output);

// Accumulates into d_kernel / d_bias; overwrites d_input unless it is empty.
void Conv2DBackward(const Conv2DGeometry& g, std::size_t batch,
                    std::span<const double> input, std::span<const double> kernel,
                    std::span<const double> d_output, std::span<double> d_input,
                    std::span<double> d_kernel, std::span<double> d_bias);

void DenseForward(std::size_t batch, std::size_t in, std::size_t out,
                  std::span<const double> x, std::span<const double> weight,
                  std::span<const double> bias, std::span<double> y);

void DenseBackward(std::size_t batch, std::size_t in, std::size_t out,
                   std::span<const double> x, std::span<const double> weight,
                   std::span<const double> d_y, std::span<double> d_x,
                   std::span<double> d_weight, std::span<double> d_bias);

void LstmForward(std::size_t batch, std::size_t in, std::size_t hidden,
                 std::span<const double> x, std::span<const double> h,
                 std::span<const double> c, std::span<const double> weight,
                 std::span<const double> bias, std::span<double> h_out,
                 std::span<double> c_out, LstmStepBuffers buffers);

void LstmBackward(std::size_t batch, std::size_t in, std::size_t hidden,
                  std::span<const double> x, std::span<const double> h,
                  std::span<const double> c, std::span<const double> weight,
                  std::span<const double> gates, std::span<const double> tanh_c,
                  std::span<const double> d_h_out,
                  std::span<const double> d_c_out, std::span<double> d_x,
                  std::span<double> d_h, std::span<double> d_c,
                  std::span<double> d_weight, std::span<double> d_bias);

}  // namespace reference

namespace parallel {

void Conv2DForward(const Conv2DGeometry& g, std::size_t batch,
                   std::span<const double> input, std::span<const double> kernel,
                   std::span<const double> bias, std::span<double> output);

void Conv2DBackward(const Conv2DGeometry& g, std::size_t batch,
                    std::span<const double> input, std::span<const double> kernel,
                    std::span<const double> d_output, std::span<double> d_input,
                    std::span<double> d_kernel, std::span<double> d_bias);

void DenseForward(std::size_t batch, std::size_t in, std::size_t out,
                  std::span<const double> x, std::span<const double> weight,
                  std::span<const double> bias, std::span<double> y);

void DenseBackward(std::size_t batch, std::size_t in, std::size_t out,
                   std::span<const double> x, std::span<const double> weight,
                   std::span<const double> d_y, std::span<double> d_x,
                   std::span<double> d_weight, std::span<double> d_bias);

void LstmForward(std::size_t batch, std::size_t in, std::size_t hidden,
                 std::span<const double> x, std::span<const double> h,
                 std::span<const double> c, std::span<const double> weight,
                 std::span<const double> bias, std::span<double> h_out,
                 std::span<double> c_out, LstmStepBuffers buffers);

void LstmBackward(std::size_t batch, std::size_t in, std::size_t hidden,
                  std::span<const double> x, std::span<const double> h,
                  std::span<const double> c, std::span<const double> weight,
                  std::span<const double> gates, std::span<const double> tanh_c,
                  std::span<const double> d_h_out,
                  std::span<const double> d_c_out, std::span<double> d_x,
                  std::span<double> d_h, std::span<double> d_c,
                  std::span<double> d_weight, std::span<double> d_bias);

void ReluInPlace(std::span<double> values);
// d_values *= (activated > 0)
void ReluBackwardInPlace(std::span<const double> activated, std::span<double> d_values);

}  // namespace parallel

}  // namespace textrl
