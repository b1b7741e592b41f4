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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <string>
#include <vector>

#include "support.hpp"
#include "textrl/env/text_environment.hpp"
#include "textrl/errors.hpp"

using namespace textrl;

namespace {

// Row i is filled with the value i + 1, so any exposed slot is identifiable
// and non-zero.
TokenFeatureSequence NumberedText(std::size_t length, std::size_t dim = 105) {
  TokenFeatureSequence seq;
  seq.feature_dim = dim;
  for (std::size_t i = 0; i < length; ++i) {
    seq.tokens.push_back("t" + std::to_string(i));
    seq.features.insert(seq.features.end(), dim, static_cast<double>(i + 1));
  }
  return seq;
}

TextEnvironment MakeEnv(int classes = 3, RewardConfig rewards = {}) {
  return TextEnvironment(rewards, ActionSpace(classes));
}

}  // namespace

TEST_CASE("action space layout") {
  const ActionSpace space(3);
  CHECK(space.size() == 4);
  CHECK(space.FromIndex(0) == Action::Classify(1));
  CHECK(space.FromIndex(2) == Action::Classify(3));
  CHECK(space.FromIndex(3) == Action::MoveForward());
  CHECK(space.ToIndex(Action::MoveForward()) == 3);
  CHECK_THROWS_AS(space.FromIndex(4), UsageError);
  const ActionSpace both(5, true);
  CHECK(both.size() == 7);
  CHECK(both.FromIndex(6) == Action::MoveBackward());
  CHECK_THROWS_AS(space.ToIndex(Action::MoveBackward()), UsageError);
}

TEST_CASE("reward config validation") {
  CHECK_NOTHROW(RewardConfig{}.Validate());
  CHECK_THROWS_AS((RewardConfig{0.0, 1.0, -1.0, 50}.Validate()), UsageError);
  CHECK_THROWS_AS((RewardConfig{-0.05, -1.0, -1.0, 50}.Validate()), UsageError);
  CHECK_THROWS_AS((RewardConfig{-0.05, 1.0, 0.5, 50}.Validate()), UsageError);
  CHECK_THROWS_AS((RewardConfig{-0.05, 1.0, -1.0, 0}.Validate()), UsageError);
}

TEST_CASE("reset") {
  auto env = MakeEnv();
  SUBCASE("short text is zero padded") {
    const auto text = NumberedText(3);
    const Observation obs = env.Reset(text, 1);
    REQUIRE(obs.window.size() == 5 * 105);
    CHECK(obs.window[0] == 1.0);
    CHECK(obs.window[2 * 105] == 3.0);
    CHECK(std::all_of(obs.window.begin() + 3 * 105, obs.window.end(), [](double v) { return v == 0.0; }));
  }
  SUBCASE("long text shows tokens 0..4") {
    const auto text = NumberedText(100);
    const Observation obs = env.Reset(text, 2);
    CHECK(obs.window_start == 0);
    CHECK(obs.window[4 * 105] == 5.0);
  }
  SUBCASE("reset is idempotent") {
    const auto text = NumberedText(12);
    const auto a = env.Reset(text, 2);
    env.Step(Action::MoveForward());
    const auto b = env.Reset(text, 2);
    CHECK(a.window == b.window);
    CHECK(env.moves_taken() == 0);
    CHECK(env.outcome() == Outcome::kInProgress);
  }
  SUBCASE("invalid inputs") {
    const TokenFeatureSequence empty;
    CHECK_THROWS_AS(env.Reset(empty, 1), UsageError);
    const auto text = NumberedText(4);
    CHECK_THROWS_AS(env.Reset(text, 4), UsageError);
    CHECK_THROWS_AS(env.Reset(text, 0), UsageError);
  }
}

TEST_CASE("step") {
  auto env = MakeEnv();
  SUBCASE("immediate correct classification") {
    const auto text = NumberedText(20);
    env.Reset(text, 2);
    const auto r = env.Step(Action::Classify(2));
    CHECK(r.reward == 1.0);
    CHECK(r.terminal);
    CHECK(env.predicted_level() == 2);
    CHECK_THROWS_AS(env.Step(Action::Classify(1)), UsageError);
  }
  SUBCASE("wrong classification") {
    const auto text = NumberedText(20);
    env.Reset(text, 2);
    CHECK(env.Step(Action::Classify(3)).reward == -1.0);
  }
  SUBCASE("move at end of a 5-token text keeps the position") {
    const auto text = NumberedText(5);
    env.Reset(text, 1);
    const auto r = env.Step(Action::MoveForward());
    CHECK(r.reward == -0.05);
    CHECK_FALSE(r.terminal);
    CHECK(env.window_start() == 0);
    CHECK(env.moves_taken() == 1);
  }
  SUBCASE("moves advance one full window") {
    const auto text = NumberedText(12);
    env.Reset(text, 1);
    auto r = env.Step(Action::MoveForward());
    CHECK(r.observation.window_start == 5);
    CHECK(r.observation.window[0] == 6.0);
    r = env.Step(Action::MoveForward());
    CHECK(r.observation.window_start == 10);
    CHECK(r.observation.window[0] == 11.0);
    CHECK(r.observation.window[105] == 12.0);
    CHECK(r.observation.window[2 * 105] == 0.0);
    r = env.Step(Action::MoveForward());
    CHECK(r.observation.window_start == 10);
  }
  SUBCASE("the 50th move ends the episode undecided") {
    const auto text = NumberedText(400);
    env.Reset(text, 3);
    for (int i = 0; i < 49; ++i) CHECK_FALSE(env.Step(Action::MoveForward()).terminal);
    const auto r = env.Step(Action::MoveForward());
    CHECK(r.terminal);
    CHECK(r.reward == -1.0);
    CHECK(env.outcome() == Outcome::kUndecided);
    CHECK_FALSE(env.predicted_level().has_value());
  }
  SUBCASE("backward moves when enabled") {
    TextEnvironment both(RewardConfig{}, ActionSpace(3, true));
    const auto text = NumberedText(12);
    both.Reset(text, 1);
    both.Step(Action::MoveForward());
    const auto r = both.Step(Action::MoveBackward());
    CHECK(r.observation.window_start == 0);
    CHECK(r.reward == -0.05);
    CHECK(both.text_seen_fraction() == doctest::Approx(10.0 / 12.0));
  }
}

TEST_CASE("text seen fraction") {
  CHECK(TextSeenFraction(0, 311) == doctest::Approx(5.0 / 311.0));
  CHECK(TextSeenFraction(0, 3) == 1.0);
  CHECK(TextSeenFraction(5, 20) == 0.5);
  auto env = MakeEnv();
  const auto text = NumberedText(20);
  env.Reset(text, 1);
  env.Step(Action::MoveForward());
  env.Step(Action::Classify(1));
  CHECK(env.text_seen_fraction() == 0.5);
}

TEST_CASE("randomized episodes respect every invariant") {
  Rng rng(2024);
  for (int episode = 0; episode < 2000; ++episode) {
    const int classes = 2 + static_cast<int>(UniformIndex(rng, 4));
    const RewardConfig rewards{-UniformReal(rng, 0.01, 1.0), UniformReal(rng, 0.1, 2.0),
                               -UniformReal(rng, 0.1, 2.0), 1 + UniformIndex(rng, 20)};
    TextEnvironment env(rewards, ActionSpace(classes));
    const auto text = NumberedText(1 + UniformIndex(rng, 60), 3);
    const int truth = 1 + static_cast<int>(UniformIndex(rng, static_cast<std::uint64_t>(classes)));
    env.Reset(text, truth);
    double total = 0.0;
    std::size_t moves = 0, steps = 0;
    while (true) {
      const bool move = UniformUnit(rng) < 0.8;
      const Action a = move ? Action::MoveForward()
                            : Action::Classify(1 + static_cast<int>(UniformIndex(
                                                       rng, static_cast<std::uint64_t>(classes))));
      const std::size_t before = env.window_start();
      const auto r = env.Step(a);
      ++steps;
      total += r.reward;
      const auto& w = r.observation.window;
      for (std::size_t slot = 0; slot < 5; ++slot) {
        const std::size_t tok = r.observation.window_start + slot;
        const double expect = tok < text.size() ? static_cast<double>(tok + 1) : 0.0;
        CHECK(w[slot * 3] == expect);
      }
      if (move) {
        ++moves;
        const std::size_t after = env.window_start();
        CHECK(after == (before + 5 < text.size() ? before + 5 : before));
      }
      if (r.terminal) break;
      CHECK(env.moves_taken() < rewards.max_moves);
    }
    CHECK(steps <= rewards.max_moves + 1);
    CHECK(env.moves_taken() <= rewards.max_moves);
    if (env.outcome() == Outcome::kUndecided) {
      CHECK(moves == rewards.max_moves);
      CHECK(total == doctest::Approx(static_cast<double>(moves - 1) * rewards.move_penalty +
                                     rewards.incorrect_penalty));
    } else {
      const double terminal = *env.predicted_level() == truth ? rewards.correct_reward
                                                              : rewards.incorrect_penalty;
      CHECK(total == doctest::Approx(static_cast<double>(moves) * rewards.move_penalty + terminal));
    }
  }
}
