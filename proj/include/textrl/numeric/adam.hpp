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

#include <span>

#include "textrl/numeric/tensor.hpp"

namespace textrl {

struct AdamOptions {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  // Zero each gradient once consumed, saving a separate pass over memory
  // before the next backward.
  bool clear_gradients = false;
};

// One bias-corrected adaptive-moment update from the populated gradients.
// Increments each parameter's step counter.
void AdamStep(std::span<Parameter* const> params, double learning_rate,
              const AdamOptions& options = {});

}  // namespace textrl
