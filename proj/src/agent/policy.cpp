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

#include "textrl/agent/policy.hpp"

#include "textrl/errors.hpp"

namespace textrl {

std::size_t Argmax(std::span<const double> values) {
  if (values.empty()) throw UsageError("argmax of empty vector");
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

std::size_t SelectAction(std::span<const double> q, double epsilon, Rng& rng) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw UsageError("epsilon must lie in [0, 1]");
  if (q.empty()) throw UsageError("no actions to select from");
  // Draw unconditionally so the random stream does not depend on epsilon == 0.
  const double u = UniformUnit(rng);
  if (u < epsilon) return UniformIndex(rng, q.size());
  return Argmax(q);
}

double EpsilonSchedule::At(std::size_t episode) const {
  if (anneal_span == 0 || episode >= anneal_span) return final;
  const double progress = static_cast<double>(episode) / static_cast<double>(anneal_span);
  return initial + (final - initial) * progress;
}

}  // namespace textrl
