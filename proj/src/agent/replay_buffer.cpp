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

#include "textrl/agent/replay_buffer.hpp"

#include "textrl/errors.hpp"

namespace textrl {

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw UsageError("replay buffer capacity must be positive");
  items_.reserve(capacity);
}

void ReplayBuffer::Push(Transition t) {
  if (items_.size() < capacity_) {
    items_.push_back(std::move(t));
    return;
  }
  items_[next_] = std::move(t);
  next_ = (next_ + 1) % capacity_;
}

const Transition& ReplayBuffer::at(std::size_t i) const {
  if (i >= items_.size()) throw UsageError("replay index out of range");
  return items_[(next_ + i) % items_.size()];
}

std::optional<std::vector<const Transition*>> ReplayBuffer::Sample(std::size_t batch_size,
                                                                   Rng& rng) const {
  if (!ready(batch_size)) return std::nullopt;
  std::vector<const Transition*> out(batch_size);
  for (auto& slot : out) slot = &items_[UniformIndex(rng, items_.size())];
  return out;
}

}  // namespace textrl
