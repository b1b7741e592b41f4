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

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "textrl/numeric/kernels.hpp"
#include "textrl/numeric/rng.hpp"
#include "textrl/numeric/tensor.hpp"

namespace textrl {

// Which kernel family a layer dispatches to. Tests flip layers to kReference
// to compare against the serial loops.
enum class KernelBackend { kParallel, kReference };

class Conv2D {
 public:
  Conv2D(std::string name, const Conv2DGeometry& geometry);

  const Conv2DGeometry& geometry() const { return geometry_; }
  Parameter& kernel() { return kernel_; }
  Parameter& bias() { return bias_; }
  const Parameter& kernel() const { return kernel_; }
  const Parameter& bias() const { return bias_; }

  // He-style uniform init: U(-sqrt(6/fan_in), sqrt(6/fan_in)), zero bias.
  void InitializeHe(Rng& rng);

  void Forward(std::size_t batch, std::span<const double> input, std::span<double> output,
               KernelBackend backend = KernelBackend::kParallel) const;
  // Accumulates parameter gradients; d_input may be empty to skip it.
  void Backward(std::size_t batch, std::span<const double> input,
                std::span<const double> d_output, std::span<double> d_input,
                KernelBackend backend = KernelBackend::kParallel);

  std::vector<Parameter*> Parameters() { return {&kernel_, &bias_}; }

 private:
  Conv2DGeometry geometry_;
  Parameter kernel_;
  Parameter bias_;
};

class Dense {
 public:
  Dense(std::string name, std::size_t in, std::size_t out);

  std::size_t in() const { return in_; }
  std::size_t out() const { return out_; }
  Parameter& weight() { return weight_; }
  Parameter& bias() { return bias_; }
  const Parameter& weight() const { return weight_; }
  const Parameter& bias() const { return bias_; }

  void InitializeHe(Rng& rng);
  // U(-sqrt(3/fan_in), sqrt(3/fan_in)); used for the linear stream heads.
  void InitializeLinear(Rng& rng);

  void Forward(std::size_t batch, std::span<const double> x, std::span<double> y,
               KernelBackend backend = KernelBackend::kParallel) const;
  void Backward(std::size_t batch, std::span<const double> x, std::span<const double> d_y,
                std::span<double> d_x, KernelBackend backend = KernelBackend::kParallel);

  std::vector<Parameter*> Parameters() { return {&weight_, &bias_}; }

 private:
  std::size_t in_;
  std::size_t out_;
  Parameter weight_;
  Parameter bias_;
};

// Standard four-gate LSTM cell with a fused [x h] weight matrix.
class LstmCell {
 public:
  // Activations kept from a forward step for the matching backward step.
  struct Cache {
    Buffer gates;   // [batch, 4 * hidden], activated
    Buffer tanh_c;  // [batch, hidden]
    void Resize(std::size_t batch, std::size_t hidden);
    LstmStepBuffers buffers() { return {gates, tanh_c}; }
  };

  LstmCell(std::string name, std::size_t input, std::size_t hidden);

  std::size_t input_size() const { return input_; }
  std::size_t hidden_size() const { return hidden_; }
  Parameter& weight() { return weight_; }
  Parameter& bias() { return bias_; }
  const Parameter& weight() const { return weight_; }
  const Parameter& bias() const { return bias_; }

  // U(-1/sqrt(hidden), 1/sqrt(hidden)) for all weights, zero bias.
  void InitializeUniform(Rng& rng);

  void Forward(std::size_t batch, std::span<const double> x, std::span<const double> h,
               std::span<const double> c, std::span<double> h_out, std::span<double> c_out,
               Cache& cache, KernelBackend backend = KernelBackend::kParallel) const;
  void Backward(std::size_t batch, std::span<const double> x, std::span<const double> h,
                std::span<const double> c, const Cache& cache,
                std::span<const double> d_h_out, std::span<const double> d_c_out,
                std::span<double> d_x, std::span<double> d_h, std::span<double> d_c,
                KernelBackend backend = KernelBackend::kParallel);

  std::vector<Parameter*> Parameters() { return {&weight_, &bias_}; }

 private:
  std::size_t input_;
  std::size_t hidden_;
  Parameter weight_;
  Parameter bias_;
};

}  // namespace textrl
