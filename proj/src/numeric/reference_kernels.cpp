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

#include <cmath>
#include <vector>

#include "textrl/numeric/kernels.hpp"

namespace textrl::reference {
namespace {

double Sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// Maps an output position and kernel tap to an input coordinate; false when
// the tap lands in zero padding.
bool InputCoord(std::size_t out, std::size_t tap, std::size_t stride, std::size_t pad_before,
                std::size_t extent, std::size_t& coord) {
  const std::size_t padded = out * stride + tap;
  if (padded < pad_before) return false;
  coord = padded - pad_before;
  return coord < extent;
}

}  // namespace

void Conv2DForward(const Conv2DGeometry& g, std::size_t batch, std::span<const double> input,
                   std::span<const double> kernel, std::span<const double> bias,
                   std::span<double> output) {
  const std::size_t oh = g.out_h(), ow = g.out_w();
  for (std::size_t b = 0; b < batch; ++b) {
    const double* in = input.data() + b * g.input_size();
    double* out = output.data() + b * g.output_size();
    for (std::size_t y = 0; y < oh; ++y) {
      for (std::size_t x = 0; x < ow; ++x) {
        for (std::size_t co = 0; co < g.out_c; ++co) {
          double acc = bias.empty() ? 0.0 : bias[co];
          for (std::size_t i = 0; i < g.k_h; ++i) {
            std::size_t iy;
            if (!InputCoord(y, i, g.stride_h, g.pad.top, g.in_h, iy)) continue;
            for (std::size_t j = 0; j < g.k_w; ++j) {
              std::size_t ix;
              if (!InputCoord(x, j, g.stride_w, g.pad.left, g.in_w, ix)) continue;
              for (std::size_t ci = 0; ci < g.in_c; ++ci) {
                acc += in[(iy * g.in_w + ix) * g.in_c + ci] *
                       kernel[((i * g.k_w + j) * g.in_c + ci) * g.out_c + co];
              }
            }
          }
          out[(y * ow + x) * g.out_c + co] = acc;
        }
      }
    }
  }
}

void Conv2DBackward(const Conv2DGeometry& g, std::size_t batch, std::span<const double> input,
                    std::span<const double> kernel, std::span<const double> d_output,
                    std::span<double> d_input, std::span<double> d_kernel,
                    std::span<double> d_bias) {
  const std::size_t oh = g.out_h(), ow = g.out_w();
  if (!d_input.empty()) std::fill(d_input.begin(), d_input.end(), 0.0);
  for (std::size_t b = 0; b < batch; ++b) {
    const double* in = input.data() + b * g.input_size();
    const double* dout = d_output.data() + b * g.output_size();
    double* din = d_input.empty() ? nullptr : d_input.data() + b * g.input_size();
    for (std::size_t y = 0; y < oh; ++y) {
      for (std::size_t x = 0; x < ow; ++x) {
        for (std::size_t co = 0; co < g.out_c; ++co) {
          const double d = dout[(y * ow + x) * g.out_c + co];
          if (!d_bias.empty()) d_bias[co] += d;
          for (std::size_t i = 0; i < g.k_h; ++i) {
            std::size_t iy;
            if (!InputCoord(y, i, g.stride_h, g.pad.top, g.in_h, iy)) continue;
            for (std::size_t j = 0; j < g.k_w; ++j) {
              std::size_t ix;
              if (!InputCoord(x, j, g.stride_w, g.pad.left, g.in_w, ix)) continue;
              for (std::size_t ci = 0; ci < g.in_c; ++ci) {
                const std::size_t k = ((i * g.k_w + j) * g.in_c + ci) * g.out_c + co;
                const std::size_t p = (iy * g.in_w + ix) * g.in_c + ci;
                d_kernel[k] += in[p] * d;
                if (din) din[p] += kernel[k] * d;
              }
            }
          }
        }
      }
    }
  }
}

void DenseForward(std::size_t batch, std::size_t in, std::size_t out, std::span<const double> x,
                  std::span<const double> weight, std::span<const double> bias,
                  std::span<double> y) {
  for (std::size_t b = 0; b < batch; ++b) {
    for (std::size_t o = 0; o < out; ++o) {
      double acc = bias.empty() ? 0.0 : bias[o];
      for (std::size_t i = 0; i < in; ++i) acc += x[b * in + i] * weight[i * out + o];
      y[b * out + o] = acc;
    }
  }
}

void DenseBackward(std::size_t batch, std::size_t in, std::size_t out, std::span<const double> x,
                   std::span<const double> weight, std::span<const double> d_y,
                   std::span<double> d_x, std::span<double> d_weight, std::span<double> d_bias) {
  for (std::size_t b = 0; b < batch; ++b) {
    for (std::size_t i = 0; i < in; ++i) {
      double acc = 0.0;
      for (std::size_t o = 0; o < out; ++o) {
        d_weight[i * out + o] += x[b * in + i] * d_y[b * out + o];
        acc += weight[i * out + o] * d_y[b * out + o];
      }
      if (!d_x.empty()) d_x[b * in + i] = acc;
    }
    if (!d_bias.empty()) {
      for (std::size_t o = 0; o < out; ++o) d_bias[o] += d_y[b * out + o];
    }
  }
}

void LstmForward(std::size_t batch, std::size_t in, std::size_t hidden, std::span<const double> x,
                 std::span<const double> h, std::span<const double> c,
                 std::span<const double> weight, std::span<const double> bias,
                 std::span<double> h_out, std::span<double> c_out, LstmStepBuffers buffers) {
  const std::size_t gates = 4 * hidden;
  for (std::size_t b = 0; b < batch; ++b) {
    double* z = buffers.gates.data() + b * gates;
    for (std::size_t k = 0; k < gates; ++k) {
      double acc = bias[k];
      for (std::size_t i = 0; i < in; ++i) acc += x[b * in + i] * weight[i * gates + k];
      for (std::size_t i = 0; i < hidden; ++i) {
        acc += h[b * hidden + i] * weight[(in + i) * gates + k];
      }
      z[k] = acc;
    }
    for (std::size_t u = 0; u < hidden; ++u) {
      const double ig = Sigmoid(z[u]);
      const double fg = Sigmoid(z[hidden + u]);
      const double og = Sigmoid(z[2 * hidden + u]);
      const double gg = std::tanh(z[3 * hidden + u]);
      z[u] = ig;
      z[hidden + u] = fg;
      z[2 * hidden + u] = og;
      z[3 * hidden + u] = gg;
      const double cn = fg * c[b * hidden + u] + ig * gg;
      const double tc = std::tanh(cn);
      c_out[b * hidden + u] = cn;
      buffers.tanh_c[b * hidden + u] = tc;
      h_out[b * hidden + u] = og * tc;
    }
  }
}

void LstmBackward(std::size_t batch, std::size_t in, std::size_t hidden,
                  std::span<const double> x, std::span<const double> h,
                  std::span<const double> c, std::span<const double> weight,
                  std::span<const double> gates, std::span<const double> tanh_c,
                  std::span<const double> d_h_out,
                  std::span<const double> d_c_out, std::span<double> d_x, std::span<double> d_h,
                  std::span<double> d_c, std::span<double> d_weight, std::span<double> d_bias) {
  const std::size_t gates_n = 4 * hidden;
  std::vector<double> dz(gates_n);
  for (std::size_t b = 0; b < batch; ++b) {
    const double* a = gates.data() + b * gates_n;
    for (std::size_t u = 0; u < hidden; ++u) {
      const double ig = a[u], fg = a[hidden + u], og = a[2 * hidden + u], gg = a[3 * hidden + u];
      const double tc = tanh_c[b * hidden + u];
      const double dh = d_h_out.empty() ? 0.0 : d_h_out[b * hidden + u];
      double dc = d_c_out.empty() ? 0.0 : d_c_out[b * hidden + u];
      dc += dh * og * (1.0 - tc * tc);
      dz[u] = dc * gg * ig * (1.0 - ig);
      dz[hidden + u] = dc * c[b * hidden + u] * fg * (1.0 - fg);
      dz[2 * hidden + u] = dh * tc * og * (1.0 - og);
      dz[3 * hidden + u] = dc * ig * (1.0 - gg * gg);
      if (!d_c.empty()) d_c[b * hidden + u] = dc * fg;
    }
    for (std::size_t k = 0; k < gates_n; ++k) d_bias[k] += dz[k];
    for (std::size_t i = 0; i < in + hidden; ++i) {
      const double v = i < in ? x[b * in + i] : h[b * hidden + (i - in)];
      double acc = 0.0;
      for (std::size_t k = 0; k < gates_n; ++k) {
        d_weight[i * gates_n + k] += v * dz[k];
        acc += weight[i * gates_n + k] * dz[k];
      }
      if (i < in) {
        if (!d_x.empty()) d_x[b * in + i] = acc;
      } else if (!d_h.empty()) {
        d_h[b * hidden + (i - in)] = acc;
      }
    }
  }
}

}  // namespace textrl::reference
