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
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "textrl/numeric/tensor.hpp"

namespace textrl {

// Loss value plus an optional fingerprint of the piecewise-linear regime the
// forward pass ran in (e.g. a hash of ReLU on/off masks). A perturbation that
// changes the fingerprint straddles a kink, where central differences are not
// a valid oracle; such coordinates are skipped and counted.
struct LossProbe {
  double loss = 0.0;
  std::uint64_t regime = 0;
};

struct GradCheckOptions {
  double step = 1e-5;
  double tolerance = 1e-4;
  std::size_t samples_per_parameter = 200;
  std::uint64_t seed = 0;
};

struct ParameterCheck {
  std::string name;
  double max_relative_error = 0.0;
  std::size_t checked = 0;
  std::size_t skipped_kinks = 0;
};

struct GradientCheckReport {
  std::vector<ParameterCheck> parameters;
  double tolerance = 0.0;
  bool passed = false;
  std::string diagnostic;

  double max_relative_error() const;
};

// |analytic - numeric| / max(|analytic|, |numeric|, 1e-8)
double RelativeError(double analytic, double numeric);

// `backprop` must leave d(loss)/d(param) in every parameter's grad (zeroing
// first). `evaluate` must not touch gradients. Parameters are restored
// bit-exactly after each probe.
GradientCheckReport CheckGradients(std::span<Parameter* const> params,
                                   const std::function<LossProbe()>& evaluate,
                                   const std::function<void()>& backprop,
                                   const GradCheckOptions& options = {});

}  // namespace textrl
