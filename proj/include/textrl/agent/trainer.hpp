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
#include <iosfwd>
#include <optional>
#include <string>
#include <span>
#include <vector>

#include "textrl/agent/policy.hpp"
#include "textrl/agent/q_network.hpp"
#include "textrl/agent/replay_buffer.hpp"
#include "textrl/agent/targets.hpp"
#include "textrl/errors.hpp"
#include "textrl/env/text_environment.hpp"
#include "textrl/text/features.hpp"

namespace textrl {

struct Hyperparameters {
  double learning_rate = 1e-4;
  double discount = 0.99;
  std::size_t training_episodes = 300000;
  std::size_t testing_episodes = 3000;
  std::size_t target_sync_episodes = 5;
  std::size_t batch_size = 32;
  std::size_t buffer_capacity = 1000;
  double epsilon_initial = 1.0;
  double epsilon_final = 0.1;
  double anneal_fraction = 0.5;  // of training_episodes
  DuelingMode dueling = DuelingMode::kMeanCentered;
  TargetMode target_mode = TargetMode::kDouble;
  bool allow_backward = false;

  void Validate() const;
  EpsilonSchedule epsilon_schedule() const;
};

struct EpisodeLog {
  std::size_t episode = 0;
  double total_reward = 0.0;
  double mean_loss = 0.0;  // over the updates made during the episode; 0 if none
  std::size_t updates = 0;
  double epsilon = 0.0;
  std::size_t moves = 0;
  Outcome outcome = Outcome::kInProgress;
  int predicted = 0;  // 0 when undecided
  int true_level = 0;
};

// Thrown when a loss turns non-finite. The trainer's target network still
// holds the parameters from the last sync.
class TrainingDiverged : public NumericError {
 public:
  TrainingDiverged(std::size_t episode, const std::string& what)
      : NumericError("training diverged in episode " + std::to_string(episode) + ": " + what),
        episode_(episode) {}
  std::size_t episode() const { return episode_; }

 private:
  std::size_t episode_;
};

class Trainer {
 public:
  Trainer(const Hyperparameters& hp, const RewardConfig& rewards, int classes,
          std::uint64_t seed);

  // Plays one epsilon-greedy episode on a text drawn uniformly by class, then
  // uniformly within the class. After every environment step, one gradient
  // update if the replay buffer can fill a batch. Syncs the target network
  // every target_sync_episodes episodes.
  EpisodeLog RunEpisode(const FeaturizedCorpus& train);

  // Runs the remaining episodes up to hp.training_episodes.
  std::vector<EpisodeLog> Train(const FeaturizedCorpus& train,
                                const std::function<void(const EpisodeLog&)>& on_episode = {});

  // One batched double/vanilla Q-learning update; returns the batch loss, or
  // nullopt when the buffer is not ready.
  std::optional<double> UpdateStep();

  const QNetwork& main() const { return main_; }
  QNetwork& main() { return main_; }
  const QNetwork& target() const { return target_; }
  const ReplayBuffer& buffer() const { return buffer_; }
  const ActionSpace& actions() const { return actions_; }
  std::size_t episodes_done() const { return episode_; }
  void SyncTarget() { target_.CopyParametersFrom(main_); }

 private:
  Hyperparameters hp_;
  RewardConfig rewards_;
  ActionSpace actions_;
  EpsilonSchedule schedule_;
  QNetwork main_;
  QNetwork target_;
  ReplayBuffer buffer_;
  Rng rng_;
  std::size_t episode_ = 0;
  QNetwork::Cache cache_;
};

void WriteTrainingLogHeader(std::ostream& out);
void WriteTrainingLogRecord(std::ostream& out, const EpisodeLog& log);

std::string OutcomeName(Outcome outcome);

}  // namespace textrl
