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

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "textrl/numeric/aligned.hpp"
#include "textrl/numeric/kernels.hpp"

namespace textrl::parallel {
namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstMap = Eigen::Map<const RowMatrix>;
using MutMap = Eigen::Map<RowMatrix>;
using ConstRowVec = Eigen::Map<const Eigen::RowVectorXd>;
using MutRowVec = Eigen::Map<Eigen::RowVectorXd>;

inline long L(std::size_t n) { return static_cast<long>(n); }

ConstMap View(std::span<const double> s, std::size_t rows, std::size_t cols) {
  return ConstMap(s.data(), L(rows), L(cols));
}
MutMap View(std::span<double> s, std::size_t rows, std::size_t cols) {
  return MutMap(s.data(), L(rows), L(cols));
}

// Reused per thread; im2col buffers for the big layers run to several MB.
Buffer& Scratch(std::size_t n, int slot) {
  thread_local Buffer buffers[2];
  auto& buf = buffers[slot];
  if (buf.size() < n) buf.resize(n);
  return buf;
}

// Vectorised through Eigen's packet exp; scalar libm exp/tanh calls used to
// cost more than the gate matrix product itself. Overflow of exp saturates
// both functions correctly.
void SigmoidInPlace(double* v, std::size_t n) {
  auto a = Eigen::Map<Eigen::ArrayXd>(v, L(n));
  a = 1.0 / (1.0 + (-a).exp());
}

void TanhInPlace(double* v, std::size_t n) {
  auto a = Eigen::Map<Eigen::ArrayXd>(v, L(n));
  a = 2.0 / (1.0 + (-2.0 * a).exp()) - 1.0;
}

// One row of the im2col matrix per output position: the receptive field in
// (tap_h, tap_w, channel) order, zeros where the tap hits padding.
void Im2Col(const Conv2DGeometry& g, std::size_t batch, const double* input, double* cols) {
  const long oh = L(g.out_h()), ow = L(g.out_w());
  const std::size_t patch = g.patch_size();
#pragma omp parallel for collapse(2) schedule(static)
  for (long b = 0; b < L(batch); ++b) {
    for (long y = 0; y < oh; ++y) {
      const double* in = input + b * L(g.input_size());
      for (long x = 0; x < ow; ++x) {
        double* row = cols + ((b * oh + y) * ow + x) * L(patch);
        for (std::size_t i = 0; i < g.k_h; ++i) {
          const long iy = y * L(g.stride_h) + L(i) - L(g.pad.top);
          for (std::size_t j = 0; j < g.k_w; ++j) {
            const long ix = x * L(g.stride_w) + L(j) - L(g.pad.left);
            double* dst = row + (i * g.k_w + j) * g.in_c;
            if (iy < 0 || iy >= L(g.in_h) || ix < 0 || ix >= L(g.in_w)) {
              std::fill(dst, dst + g.in_c, 0.0);
            } else {
              const double* src = in + (iy * L(g.in_w) + ix) * L(g.in_c);
              std::copy(src, src + g.in_c, dst);
            }
          }
        }
      }
    }
  }
}

// Scatter-add of column gradients back to the input; one thread per sample so
// overlapping receptive fields never race.
void Col2Im(const Conv2DGeometry& g, std::size_t batch, const double* cols, double* d_input) {
  const long oh = L(g.out_h()), ow = L(g.out_w());
  const std::size_t patch = g.patch_size();
#pragma omp parallel for schedule(static)
  for (long b = 0; b < L(batch); ++b) {
    double* din = d_input + b * L(g.input_size());
    std::fill(din, din + g.input_size(), 0.0);
    for (long y = 0; y < oh; ++y) {
      for (long x = 0; x < ow; ++x) {
        const double* row = cols + ((b * oh + y) * ow + x) * L(patch);
        for (std::size_t i = 0; i < g.k_h; ++i) {
          const long iy = y * L(g.stride_h) + L(i) - L(g.pad.top);
          if (iy < 0 || iy >= L(g.in_h)) continue;
          for (std::size_t j = 0; j < g.k_w; ++j) {
            const long ix = x * L(g.stride_w) + L(j) - L(g.pad.left);
            if (ix < 0 || ix >= L(g.in_w)) continue;
            const double* src = row + (i * g.k_w + j) * g.in_c;
            double* dst = din + (iy * L(g.in_w) + ix) * L(g.in_c);
            for (std::size_t ci = 0; ci < g.in_c; ++ci) dst[ci] += src[ci];
          }
        }
      }
    }
  }
}

}  // namespace

void Conv2DForward(const Conv2DGeometry& g, std::size_t batch, std::span<const double> input,
                   std::span<const double> kernel, std::span<const double> bias,
                   std::span<double> output) {
  const std::size_t rows = batch * g.out_h() * g.out_w();
  const std::size_t patch = g.patch_size();
  auto& cols = Scratch(rows * patch, 0);
  Im2Col(g, batch, input.data(), cols.data());
  auto out = View(output, rows, g.out_c);
  out.noalias() = ConstMap(cols.data(), L(rows), L(patch)) * View(kernel, patch, g.out_c);
  if (!bias.empty()) out.rowwise() += ConstRowVec(bias.data(), L(g.out_c));
}

void Conv2DBackward(const Conv2DGeometry& g, std::size_t batch, std::span<const double> input,
                    std::span<const double> kernel, std::span<const double> d_output,
                    std::span<double> d_input, std::span<double> d_kernel,
                    std::span<double> d_bias) {
  const std::size_t rows = batch * g.out_h() * g.out_w();
  const std::size_t patch = g.patch_size();
  auto dout = View(d_output, rows, g.out_c);
  auto& cols = Scratch(rows * patch, 0);
  Im2Col(g, batch, input.data(), cols.data());
  View(d_kernel, patch, g.out_c).noalias() +=
      ConstMap(cols.data(), L(rows), L(patch)).transpose() * dout;
  if (!d_bias.empty()) MutRowVec(d_bias.data(), L(g.out_c)) += dout.colwise().sum();
  if (!d_input.empty()) {
    auto& dcols = Scratch(rows * patch, 1);
    MutMap(dcols.data(), L(rows), L(patch)).noalias() =
        dout * View(kernel, patch, g.out_c).transpose();
    Col2Im(g, batch, dcols.data(), d_input.data());
  }
}

void DenseForward(std::size_t batch, std::size_t in, std::size_t out, std::span<const double> x,
                  std::span<const double> weight, std::span<const double> bias,
                  std::span<double> y) {
  auto ym = View(y, batch, out);
  ym.noalias() = View(x, batch, in) * View(weight, in, out);
  if (!bias.empty()) ym.rowwise() += ConstRowVec(bias.data(), L(out));
}

void DenseBackward(std::size_t batch, std::size_t in, std::size_t out, std::span<const double> x,
                   std::span<const double> weight, std::span<const double> d_y,
                   std::span<double> d_x, std::span<double> d_weight, std::span<double> d_bias) {
  auto dy = View(d_y, batch, out);
  View(d_weight, in, out).noalias() += View(x, batch, in).transpose() * dy;
  if (!d_bias.empty()) MutRowVec(d_bias.data(), L(out)) += dy.colwise().sum();
  if (!d_x.empty()) View(d_x, batch, in).noalias() = dy * View(weight, in, out).transpose();
}

namespace {

void Concat(std::size_t batch, std::size_t in, std::size_t hidden, std::span<const double> x,
            std::span<const double> h, double* xh) {
  const std::size_t width = in + hidden;
#pragma omp parallel for schedule(static)
  for (long b = 0; b < L(batch); ++b) {
    std::copy_n(x.data() + b * L(in), in, xh + b * L(width));
    std::copy_n(h.data() + b * L(hidden), hidden, xh + b * L(width) + L(in));
  }
}

}  // namespace

void LstmForward(std::size_t batch, std::size_t in, std::size_t hidden, std::span<const double> x,
                 std::span<const double> h, std::span<const double> c,
                 std::span<const double> weight, std::span<const double> bias,
                 std::span<double> h_out, std::span<double> c_out, LstmStepBuffers buffers) {
  const std::size_t width = in + hidden, gates = 4 * hidden;
  auto& xh = Scratch(batch * width, 0);
  Concat(batch, in, hidden, x, h, xh.data());
  auto z = View(buffers.gates, batch, gates);
  z.noalias() = ConstMap(xh.data(), L(batch), L(width)) * View(weight, width, gates);
  z.rowwise() += ConstRowVec(bias.data(), L(gates));
  // Gate blocks per row: input, forget, output (sigmoid), candidate (tanh).
#pragma omp parallel for schedule(static)
  for (long b = 0; b < L(batch); ++b) {
    double* a = buffers.gates.data() + b * L(gates);
    SigmoidInPlace(a, 3 * hidden);
    TanhInPlace(a + 3 * hidden, hidden);
    const double* ig = a;
    const double* fg = a + hidden;
    const double* og = a + 2 * hidden;
    const double* gg = a + 3 * hidden;
    const long row = b * L(hidden);
    double* cn = c_out.data() + row;
    double* tc = buffers.tanh_c.data() + row;
    for (std::size_t u = 0; u < hidden; ++u) cn[u] = fg[u] * c[row + L(u)] + ig[u] * gg[u];
    std::copy_n(cn, hidden, tc);
    TanhInPlace(tc, hidden);
    for (std::size_t u = 0; u < hidden; ++u) h_out[row + L(u)] = og[u] * tc[u];
  }
}

void LstmBackward(std::size_t batch, std::size_t in, std::size_t hidden,
                  std::span<const double> x, std::span<const double> h,
                  std::span<const double> c, std::span<const double> weight,
                  std::span<const double> gates, std::span<const double> tanh_c,
                  std::span<const double> d_h_out,
                  std::span<const double> d_c_out, std::span<double> d_x, std::span<double> d_h,
                  std::span<double> d_c, std::span<double> d_weight, std::span<double> d_bias) {
  const std::size_t width = in + hidden, gates_n = 4 * hidden;
  auto& dz = Scratch(batch * gates_n, 1);
#pragma omp parallel for collapse(2) schedule(static)
  for (long b = 0; b < L(batch); ++b) {
    for (long u = 0; u < L(hidden); ++u) {
      const long H = L(hidden);
      const double* a = gates.data() + b * L(gates_n);
      double* g = dz.data() + b * L(gates_n);
      const long s = b * H + u;
      const double ig = a[u], fg = a[H + u], og = a[2 * H + u], gg = a[3 * H + u];
      const double tc = tanh_c[s];
      const double dh = d_h_out.empty() ? 0.0 : d_h_out[s];
      double dc = d_c_out.empty() ? 0.0 : d_c_out[s];
      dc += dh * og * (1.0 - tc * tc);
      g[u] = dc * gg * ig * (1.0 - ig);
      g[H + u] = dc * c[s] * fg * (1.0 - fg);
      g[2 * H + u] = dh * tc * og * (1.0 - og);
      g[3 * H + u] = dc * ig * (1.0 - gg * gg);
      if (!d_c.empty()) d_c[s] = dc * fg;
    }
  }
  auto dzm = ConstMap(dz.data(), L(batch), L(gates_n));
  MutRowVec(d_bias.data(), L(gates_n)) += dzm.colwise().sum();
  auto& xh = Scratch(batch * width, 0);
  Concat(batch, in, hidden, x, h, xh.data());
  View(d_weight, width, gates_n).noalias() +=
      ConstMap(xh.data(), L(batch), L(width)).transpose() * dzm;
  if (d_x.empty() && d_h.empty()) return;
  if (d_h.empty()) {
    // Only the input rows of the fused weight matter.
    View(d_x, batch, in).noalias() = dzm * View(weight.first(in * gates_n), in, gates_n).transpose();
    return;
  }
  // xh is free again; reuse it for d[x h].
  MutMap(xh.data(), L(batch), L(width)).noalias() = dzm * View(weight, width, gates_n).transpose();
  for (std::size_t b = 0; b < batch; ++b) {
    if (!d_x.empty()) std::copy_n(xh.data() + b * width, in, d_x.data() + b * in);
    if (!d_h.empty()) std::copy_n(xh.data() + b * width + in, hidden, d_h.data() + b * hidden);
  }
}

void ReluInPlace(std::span<double> values) {
  const long n = L(values.size());
  double* v = values.data();
#pragma omp parallel for simd schedule(static)
  for (long i = 0; i < n; ++i) v[i] = v[i] > 0.0 ? v[i] : 0.0;
}

void ReluBackwardInPlace(std::span<const double> activated, std::span<double> d_values) {
  const long n = L(d_values.size());
  const double* a = activated.data();
  double* d = d_values.data();
#pragma omp parallel for simd schedule(static)
  for (long i = 0; i < n; ++i) d[i] = a[i] > 0.0 ? d[i] : 0.0;
}

}  // namespace textrl::parallel
