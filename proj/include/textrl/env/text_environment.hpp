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

// The document as a partially observable environment. The agent sees a
// five-token window of feature rows, may move the window (at a cost), and
// ends the episode by naming a readability level.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "textrl/text/features.hpp"

namespace textrl {

inline constexpr std::size_t kWindowTokens = 5;

struct RewardConfig {
  double move_penalty = -0.05;
  double correct_reward = 1.0;
  double incorrect_penalty = -1.0;
  std::size_t max_moves = 50;

  // Throws UsageError unless move_penalty < 0 < correct_reward,
  // incorrect_penalty < 0 and max_moves > 0.
  void Validate() const;
};

enum class ActionKind { kClassify, kMoveForward, kMoveBackward };

struct Action {
  ActionKind kind = ActionKind::kMoveForward;
  int level = 0;  // 1..K for kClassify

  static Action Classify(int level) { return {ActionKind::kClassify, level}; }
  static Action MoveForward() { return {ActionKind::kMoveForward, 0}; }
  static Action MoveBackward() { return {ActionKind::kMoveBackward, 0}; }

  bool is_move() const { return kind != ActionKind::kClassify; }
  friend bool operator==(const Action&, const Action&) = default;
};

std::string ToString(const Action& action);

// Index layout: 0..K-1 are Classify(1..K), then MoveForward, then
// MoveBackward when enabled.
class ActionSpace {
 public:
  ActionSpace(int classes, bool allow_backward = false);

  int classes() const { return classes_; }
  std::size_t move_actions() const { return allow_backward_ ? 2 : 1; }
  std::size_t size() const { return static_cast<std::size_t>(classes_) + move_actions(); }
  bool allow_backward() const { return allow_backward_; }

  Action FromIndex(std::size_t index) const;
  std::size_t ToIndex(const Action& action) const;

 private:
  int classes_;
  bool allow_backward_;
};

struct Observation {
  std::size_t window_start = 0;
  std::size_t feature_dim = 0;
  std::vector<double> window;  // [kWindowTokens, feature_dim], zero rows past the end
};

enum class Outcome { kInProgress, kClassified, kUndecided };

struct StepResult {
  Observation observation;
  double reward = 0.0;
  bool terminal = false;
};

class TextEnvironment {
 public:
  TextEnvironment(RewardConfig rewards, ActionSpace actions);

  // The environment keeps a pointer to `features`; it must outlive the episode.
  Observation Reset(const TokenFeatureSequence& features, int true_level);
  // Throws UsageError if the episode is over or was never started.
  StepResult Step(const Action& action);

  Observation Observe() const;

  const RewardConfig& rewards() const { return rewards_; }
  const ActionSpace& actions() const { return actions_; }
  std::size_t window_start() const { return window_start_; }
  std::size_t moves_taken() const { return moves_taken_; }
  Outcome outcome() const { return outcome_; }
  int true_level() const { return true_level_; }
  std::optional<int> predicted_level() const;
  std::size_t text_length() const { return features_ ? features_->size() : 0; }
  // Uses the furthest window reached, which equals the current window unless
  // backward moves are enabled.
  double text_seen_fraction() const;

 private:
  RewardConfig rewards_;
  ActionSpace actions_;
  const TokenFeatureSequence* features_ = nullptr;
  int true_level_ = 0;
  std::size_t window_start_ = 0;
  std::size_t furthest_start_ = 0;
  std::size_t moves_taken_ = 0;
  Outcome outcome_ = Outcome::kInProgress;
  int predicted_ = 0;
};

// min(window_start + 5, length) / length
double TextSeenFraction(std::size_t window_start, std::size_t text_length);

// Copies the window starting at `window_start`, zero-filling past the end.
Observation MakeObservation(const TokenFeatureSequence& features, std::size_t window_start);

}  // namespace textrl
