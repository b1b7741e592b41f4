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

#include "textrl/numeric/rng.hpp"

namespace textrl {

// Lowest index among the maxima.
std::size_t Argmax(std::span<const double> values);

// With probability epsilon a uniformly random index, otherwise Argmax(q).
std::size_t SelectAction(std::span<const double> q, double epsilon, Rng& rng);

// Linear decay from `initial` at episode 0 to `final` at `anneal_span`,
// constant afterwards.
struct EpsilonSchedule {
  double initial = 1.0;
  double final = 0.1;
  std::size_t anneal_span = 150000;

  double At(std::size_t episode) const;
};

}  // namespace textrl
