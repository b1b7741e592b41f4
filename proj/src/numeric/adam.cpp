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

#include "textrl/numeric/adam.hpp"

#include <cmath>

namespace textrl {

namespace {

template <bool kClear>
void Update(double* value, double* m, double* v, double* g, long n, double b1, double b2,
            double step_size, double inv_correction2, double eps) {
#pragma omp parallel for simd schedule(static)
  for (long i = 0; i < n; ++i) {
    const double gi = g[i];
    m[i] = b1 * m[i] + (1.0 - b1) * gi;
    v[i] = b2 * v[i] + (1.0 - b2) * gi * gi;
    value[i] -= step_size * m[i] / (std::sqrt(v[i] * inv_correction2) + eps);
    if constexpr (kClear) g[i] = 0.0;
  }
}

}  // namespace

void AdamStep(std::span<Parameter* const> params, double learning_rate,
              const AdamOptions& options) {
  const double b1 = options.beta1, b2 = options.beta2;
  for (Parameter* p : params) {
    p->step += 1;
    const double t = static_cast<double>(p->step);
    // Bias corrections folded into two scalars:
    //   value -= lr * (m / c1) / (sqrt(v / c2) + eps)
    const double step_size = learning_rate / (1.0 - std::pow(b1, t));
    const double inv_correction2 = 1.0 / (1.0 - std::pow(b2, t));
    auto update = options.clear_gradients ? Update<true> : Update<false>;
    update(p->value.data.data(), p->first_moment.data.data(), p->second_moment.data.data(),
           p->grad.data.data(), static_cast<long>(p->size()), b1, b2, step_size,
           inv_correction2, options.epsilon);
  }
}

}  // namespace textrl
