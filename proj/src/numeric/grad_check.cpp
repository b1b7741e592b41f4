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

#include "textrl/numeric/grad_check.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "textrl/numeric/rng.hpp"

namespace textrl {

double GradientCheckReport::max_relative_error() const {
  double worst = 0.0;
  for (const auto& p : parameters) worst = std::max(worst, p.max_relative_error);
  return worst;
}

double RelativeError(double analytic, double numeric) {
  const double scale = std::max({std::abs(analytic), std::abs(numeric), 1e-8});
  return std::abs(analytic - numeric) / scale;
}

GradientCheckReport CheckGradients(std::span<Parameter* const> params,
                                   const std::function<LossProbe()>& evaluate,
                                   const std::function<void()>& backprop,
                                   const GradCheckOptions& options) {
  GradientCheckReport report;
  report.tolerance = options.tolerance;

  const LossProbe base = evaluate();
  if (!std::isfinite(base.loss)) {
    report.diagnostic = "loss is not finite at the unperturbed point";
    return report;
  }
  backprop();

  Rng rng(options.seed);
  bool ok = true;
  for (Parameter* p : params) {
    ParameterCheck check{p->name};
    const std::size_t n = p->size();
    std::vector<std::size_t> coords(n);
    std::iota(coords.begin(), coords.end(), std::size_t{0});
    const std::size_t take = std::min(n, options.samples_per_parameter);
    // Partial Fisher-Yates: first `take` entries become a uniform subsample.
    for (std::size_t i = 0; i < take; ++i) {
      std::swap(coords[i], coords[i + UniformIndex(rng, n - i)]);
    }
    for (std::size_t k = 0; k < take; ++k) {
      const std::size_t i = coords[k];
      const double original = p->value[i];
      p->value[i] = original + options.step;
      const LossProbe plus = evaluate();
      p->value[i] = original - options.step;
      const LossProbe minus = evaluate();
      p->value[i] = original;
      if (!std::isfinite(plus.loss) || !std::isfinite(minus.loss)) {
        report.diagnostic = "loss is not finite when perturbing " + p->name + "[" +
                            std::to_string(i) + "]";
        report.parameters.push_back(check);
        return report;
      }
      if (plus.regime != base.regime || minus.regime != base.regime) {
        ++check.skipped_kinks;
        continue;
      }
      const double numeric = (plus.loss - minus.loss) / (2.0 * options.step);
      check.max_relative_error =
          std::max(check.max_relative_error, RelativeError(p->grad[i], numeric));
      ++check.checked;
    }
    if (!(check.max_relative_error < options.tolerance)) ok = false;
    report.parameters.push_back(std::move(check));
  }
  report.passed = ok;
  if (!ok) {
    report.diagnostic = "max relative error " + std::to_string(report.max_relative_error()) +
                        " exceeds tolerance " + std::to_string(options.tolerance);
  }
  return report;
}

}  // namespace textrl
