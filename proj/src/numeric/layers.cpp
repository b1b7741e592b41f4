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

#include "textrl/numeric/layers.hpp"

#include <cmath>

#include "textrl/errors.hpp"

namespace textrl {
namespace {

void FillUniform(Tensor& t, Rng& rng, double limit) {
  for (double& v : t.data) v = UniformReal(rng, -limit, limit);
}

}  // namespace

void Conv2DGeometry::Validate() const {
  if (in_h == 0 || in_w == 0 || in_c == 0 || k_h == 0 || k_w == 0 || out_c == 0) {
    throw ShapeError("conv2d: all dimensions must be positive");
  }
  if (stride_h == 0 || stride_w == 0) throw ShapeError("conv2d: strides must be >= 1");
  if (k_h > padded_h() || k_w > padded_w()) {
    throw ShapeError("conv2d: kernel " + std::to_string(k_h) + "x" + std::to_string(k_w) +
                     " larger than padded input " + std::to_string(padded_h()) + "x" +
                     std::to_string(padded_w()));
  }
}

Conv2D::Conv2D(std::string name, const Conv2DGeometry& geometry)
    : geometry_(geometry),
      kernel_(name + ".kernel", {geometry.k_h, geometry.k_w, geometry.in_c, geometry.out_c}),
      bias_(name + ".bias", {geometry.out_c}) {
  geometry_.Validate();
}

void Conv2D::InitializeHe(Rng& rng) {
  FillUniform(kernel_.value, rng, std::sqrt(6.0 / static_cast<double>(geometry_.patch_size())));
  bias_.value.Fill(0.0);
}

void Conv2D::Forward(std::size_t batch, std::span<const double> input, std::span<double> output,
                     KernelBackend backend) const {
  if (backend == KernelBackend::kReference) {
    reference::Conv2DForward(geometry_, batch, input, kernel_.value.data, bias_.value.data, output);
  } else {
    parallel::Conv2DForward(geometry_, batch, input, kernel_.value.data, bias_.value.data, output);
  }
}

void Conv2D::Backward(std::size_t batch, std::span<const double> input,
                      std::span<const double> d_output, std::span<double> d_input,
                      KernelBackend backend) {
  if (backend == KernelBackend::kReference) {
    reference::Conv2DBackward(geometry_, batch, input, kernel_.value.data, d_output, d_input,
                              kernel_.grad.data, bias_.grad.data);
  } else {
    parallel::Conv2DBackward(geometry_, batch, input, kernel_.value.data, d_output, d_input,
                             kernel_.grad.data, bias_.grad.data);
  }
}

Dense::Dense(std::string name, std::size_t in, std::size_t out)
    : in_(in), out_(out), weight_(name + ".weight", {in, out}), bias_(name + ".bias", {out}) {}

void Dense::InitializeHe(Rng& rng) {
  FillUniform(weight_.value, rng, std::sqrt(6.0 / static_cast<double>(in_)));
  bias_.value.Fill(0.0);
}

void Dense::InitializeLinear(Rng& rng) {
  FillUniform(weight_.value, rng, std::sqrt(3.0 / static_cast<double>(in_)));
  bias_.value.Fill(0.0);
}

void Dense::Forward(std::size_t batch, std::span<const double> x, std::span<double> y,
                    KernelBackend backend) const {
  if (backend == KernelBackend::kReference) {
    reference::DenseForward(batch, in_, out_, x, weight_.value.data, bias_.value.data, y);
  } else {
    parallel::DenseForward(batch, in_, out_, x, weight_.value.data, bias_.value.data, y);
  }
}

void Dense::Backward(std::size_t batch, std::span<const double> x, std::span<const double> d_y,
                     std::span<double> d_x, KernelBackend backend) {
  if (backend == KernelBackend::kReference) {
    reference::DenseBackward(batch, in_, out_, x, weight_.value.data, d_y, d_x, weight_.grad.data,
                             bias_.grad.data);
  } else {
    parallel::DenseBackward(batch, in_, out_, x, weight_.value.data, d_y, d_x, weight_.grad.data,
                            bias_.grad.data);
  }
}

void LstmCell::Cache::Resize(std::size_t batch, std::size_t hidden) {
  gates.resize(batch * 4 * hidden);
  tanh_c.resize(batch * hidden);
}

LstmCell::LstmCell(std::string name, std::size_t input, std::size_t hidden)
    : input_(input),
      hidden_(hidden),
      weight_(name + ".weight", {input + hidden, 4 * hidden}),
      bias_(name + ".bias", {4 * hidden}) {}

void LstmCell::InitializeUniform(Rng& rng) {
  FillUniform(weight_.value, rng, 1.0 / std::sqrt(static_cast<double>(hidden_)));
  bias_.value.Fill(0.0);
}

void LstmCell::Forward(std::size_t batch, std::span<const double> x, std::span<const double> h,
                       std::span<const double> c, std::span<double> h_out,
                       std::span<double> c_out, Cache& cache, KernelBackend backend) const {
  cache.Resize(batch, hidden_);
  if (backend == KernelBackend::kReference) {
    reference::LstmForward(batch, input_, hidden_, x, h, c, weight_.value.data, bias_.value.data,
                           h_out, c_out, cache.buffers());
  } else {
    parallel::LstmForward(batch, input_, hidden_, x, h, c, weight_.value.data, bias_.value.data,
                          h_out, c_out, cache.buffers());
  }
}

void LstmCell::Backward(std::size_t batch, std::span<const double> x, std::span<const double> h,
                        std::span<const double> c, const Cache& cache,
                        std::span<const double> d_h_out, std::span<const double> d_c_out,
                        std::span<double> d_x, std::span<double> d_h, std::span<double> d_c,
                        KernelBackend backend) {
  if (backend == KernelBackend::kReference) {
    reference::LstmBackward(batch, input_, hidden_, x, h, c, weight_.value.data, cache.gates,
                            cache.tanh_c, d_h_out, d_c_out, d_x, d_h, d_c, weight_.grad.data,
                            bias_.grad.data);
  } else {
    parallel::LstmBackward(batch, input_, hidden_, x, h, c, weight_.value.data, cache.gates,
                           cache.tanh_c, d_h_out, d_c_out, d_x, d_h, d_c, weight_.grad.data,
                           bias_.grad.data);
  }
}

}  // namespace textrl
