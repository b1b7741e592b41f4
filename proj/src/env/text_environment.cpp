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

#include "textrl/env/text_environment.hpp"

#include <algorithm>

#include "textrl/errors.hpp"

namespace textrl {

void RewardConfig::Validate() const {
  if (!(move_penalty < 0.0)) throw UsageError("move_penalty must be negative");
  if (!(correct_reward > 0.0)) throw UsageError("correct_reward must be positive");
  if (!(incorrect_penalty < 0.0)) throw UsageError("incorrect_penalty must be negative");
  if (max_moves == 0) throw UsageError("max_moves must be positive");
}

std::string ToString(const Action& action) {
  switch (action.kind) {
    case ActionKind::kClassify:
      return "classify(" + std::to_string(action.level) + ")";
    case ActionKind::kMoveForward:
      return "move-forward";
    case ActionKind::kMoveBackward:
      return "move-backward";
  }
  return "?";
}

ActionSpace::ActionSpace(int classes, bool allow_backward)
    : classes_(classes), allow_backward_(allow_backward) {
  if (classes < 2) throw UsageError("need at least 2 readability classes");
}

Action ActionSpace::FromIndex(std::size_t index) const {
  const auto k = static_cast<std::size_t>(classes_);
  if (index < k) return Action::Classify(static_cast<int>(index) + 1);
  if (index == k) return Action::MoveForward();
  if (index == k + 1 && allow_backward_) return Action::MoveBackward();
  throw UsageError("action index " + std::to_string(index) + " out of range");
}

std::size_t ActionSpace::ToIndex(const Action& action) const {
  switch (action.kind) {
    case ActionKind::kClassify:
      if (action.level < 1 || action.level > classes_) {
        throw UsageError("classify level " + std::to_string(action.level) + " outside 1.." +
                         std::to_string(classes_));
      }
      return static_cast<std::size_t>(action.level - 1);
    case ActionKind::kMoveForward:
      return static_cast<std::size_t>(classes_);
    case ActionKind::kMoveBackward:
      if (!allow_backward_) throw UsageError("backward moves are disabled");
      return static_cast<std::size_t>(classes_) + 1;
  }
  throw UsageError("unknown action");
}

double TextSeenFraction(std::size_t window_start, std::size_t text_length) {
  if (text_length == 0) return 0.0;
  return static_cast<double>(std::min(window_start + kWindowTokens, text_length)) /
         static_cast<double>(text_length);
}

Observation MakeObservation(const TokenFeatureSequence& features, std::size_t window_start) {
  Observation obs;
  obs.window_start = window_start;
  obs.feature_dim = features.feature_dim;
  obs.window.assign(kWindowTokens * features.feature_dim, 0.0);
  for (std::size_t slot = 0; slot < kWindowTokens; ++slot) {
    const std::size_t t = window_start + slot;
    if (t >= features.size()) break;
    const auto row = features.row(t);
    std::copy(row.begin(), row.end(), obs.window.begin() + slot * features.feature_dim);
  }
  return obs;
}

TextEnvironment::TextEnvironment(RewardConfig rewards, ActionSpace actions)
    : rewards_(rewards), actions_(actions) {
  rewards_.Validate();
}

Observation TextEnvironment::Reset(const TokenFeatureSequence& features, int true_level) {
  if (features.empty()) throw UsageError("cannot reset on an empty feature sequence");
  if (true_level < 1 || true_level > actions_.classes()) {
    throw UsageError("true level " + std::to_string(true_level) + " outside 1.." +
                     std::to_string(actions_.classes()));
  }
  features_ = &features;
  true_level_ = true_level;
  window_start_ = 0;
  furthest_start_ = 0;
  moves_taken_ = 0;
  outcome_ = Outcome::kInProgress;
  predicted_ = 0;
  return Observe();
}

Observation TextEnvironment::Observe() const {
  if (!features_) throw UsageError("environment has not been reset");
  return MakeObservation(*features_, window_start_);
}

StepResult TextEnvironment::Step(const Action& action) {
  if (!features_) throw UsageError("step before reset");
  if (outcome_ != Outcome::kInProgress) throw UsageError("step after terminal state");
  actions_.ToIndex(action);  // validates against this action space

  StepResult result;
  if (action.kind == ActionKind::kClassify) {
    outcome_ = Outcome::kClassified;
    predicted_ = action.level;
    result.reward =
        action.level == true_level_ ? rewards_.correct_reward : rewards_.incorrect_penalty;
    result.terminal = true;
  } else {
    if (action.kind == ActionKind::kMoveForward) {
      // A window that already reaches the end stays put.
      if (window_start_ + kWindowTokens < features_->size()) window_start_ += kWindowTokens;
    } else if (window_start_ >= kWindowTokens) {
      window_start_ -= kWindowTokens;
    }
    furthest_start_ = std::max(furthest_start_, window_start_);
    ++moves_taken_;
    result.reward = rewards_.move_penalty;
    if (moves_taken_ == rewards_.max_moves) {
      outcome_ = Outcome::kUndecided;
      result.reward = rewards_.incorrect_penalty;
      result.terminal = true;
    }
  }
  result.observation = Observe();
  return result;
}

std::optional<int> TextEnvironment::predicted_level() const {
  if (outcome_ == Outcome::kClassified) return predicted_;
  return std::nullopt;
}

double TextEnvironment::text_seen_fraction() const {
  return TextSeenFraction(furthest_start_, text_length());
}

}  // namespace textrl
