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
#include <optional>
#include <vector>

#include "textrl/agent/q_network.hpp"
#include "textrl/env/text_environment.hpp"
#include "textrl/numeric/rng.hpp"

namespace textrl {

struct Transition {
  Observation state;
  std::size_t action = 0;  // ActionSpace index
  double reward = 0.0;
  Observation next_state;
  bool terminal = false;
  RecurrentState recurrent;  // agent state before this step
};

// Fixed-capacity FIFO of transitions.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity = 1000);

  std::size_t capacity() const { return capacity_; }
  std::size_t size() const { return items_.size(); }
  bool ready(std::size_t batch_size) const { return size() >= batch_size && batch_size > 0; }

  // Evicts the oldest entry once full.
  void Push(Transition t);

  // i = 0 is the oldest entry still held.
  const Transition& at(std::size_t i) const;

  // Uniform with replacement; nullopt until the buffer holds batch_size items.
  std::optional<std::vector<const Transition*>> Sample(std::size_t batch_size, Rng& rng) const;

 private:
  std::size_t capacity_;
  std::size_t next_ = 0;  // slot the next push writes once full
  std::vector<Transition> items_;
};

}  // namespace textrl
