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

#include "textrl/agent/trainer.hpp"

#include <cmath>
#include <ostream>

#include "textrl/numeric/adam.hpp"
#include "textrl/text/embeddings.hpp"

namespace textrl {
namespace {

// Second stream keeps exploration/sampling independent of init draws.
constexpr std::uint64_t kActingStream = 0x9E3779B97F4A7C15ull;

}  // namespace

void Hyperparameters::Validate() const {
  if (!(learning_rate > 0.0)) throw UsageError("learning_rate must be positive");
  if (!(discount > 0.0 && discount <= 1.0)) throw UsageError("discount must lie in (0, 1]");
  if (batch_size == 0) throw UsageError("batch_size must be positive");
  if (buffer_capacity < batch_size) throw UsageError("buffer_capacity must be >= batch_size");
  if (target_sync_episodes == 0) throw UsageError("target_sync_episodes must be positive");
  if (!(epsilon_initial >= 0.0 && epsilon_initial <= 1.0) ||
      !(epsilon_final >= 0.0 && epsilon_final <= 1.0) || epsilon_final > epsilon_initial) {
    throw UsageError("epsilon must satisfy 0 <= final <= initial <= 1");
  }
  if (!(anneal_fraction >= 0.0 && anneal_fraction <= 1.0)) {
    throw UsageError("anneal_fraction must lie in [0, 1]");
  }
}

EpsilonSchedule Hyperparameters::epsilon_schedule() const {
  const auto span = static_cast<std::size_t>(
      std::llround(anneal_fraction * static_cast<double>(training_episodes)));
  return {epsilon_initial, epsilon_final, span};
}

Trainer::Trainer(const Hyperparameters& hp, const RewardConfig& rewards, int classes,
                 std::uint64_t seed)
    : hp_(hp),
      rewards_(rewards),
      actions_(classes, hp.allow_backward),
      schedule_(hp.epsilon_schedule()),
      main_(QNetworkConfig{classes, actions_.move_actions(), hp.dueling}),
      target_(main_.config()),
      buffer_(hp.buffer_capacity),
      rng_(seed ^ kActingStream) {
  hp_.Validate();
  rewards_.Validate();
  Rng init(seed);
  main_.Initialize(init);
  SyncTarget();
}

EpisodeLog Trainer::RunEpisode(const FeaturizedCorpus& train) {
  if (train.size() == 0) throw UsageError("training set is empty");
  std::vector<std::vector<std::size_t>> by_class(static_cast<std::size_t>(actions_.classes()));
  for (std::size_t i = 0; i < train.size(); ++i) {
    by_class.at(static_cast<std::size_t>(train.levels[i] - 1)).push_back(i);
  }
  std::vector<std::size_t> present;
  for (std::size_t k = 0; k < by_class.size(); ++k) {
    if (!by_class[k].empty()) present.push_back(k);
  }
  const auto& pool = by_class[present[UniformIndex(rng_, present.size())]];
  const std::size_t text = pool[UniformIndex(rng_, pool.size())];

  EpisodeLog log;
  log.episode = episode_;
  log.epsilon = schedule_.At(episode_);
  log.true_level = train.levels[text];

  TextEnvironment env(rewards_, actions_);
  Observation obs = env.Reset(train.texts[text], train.levels[text]);
  RecurrentState state = RecurrentState::Zero();
  double loss_sum = 0.0;
  try {
    while (true) {
      QOutput out = ForwardQ(main_, obs, state);
      const std::size_t a = SelectAction(out.q, log.epsilon, rng_);
      StepResult step = env.Step(actions_.FromIndex(a));
      log.total_reward += step.reward;
      buffer_.Push(Transition{std::move(obs), a, step.reward, step.observation, step.terminal,
                              std::move(state)});
      obs = std::move(step.observation);
      state = std::move(out.next);
      if (auto loss = UpdateStep()) {
        loss_sum += *loss;
        ++log.updates;
      }
      if (step.terminal) break;
    }
  } catch (const NumericError& e) {
    throw TrainingDiverged(episode_, e.what());
  }
  log.mean_loss = log.updates ? loss_sum / static_cast<double>(log.updates) : 0.0;
  log.moves = env.moves_taken();
  log.outcome = env.outcome();
  log.predicted = env.predicted_level().value_or(0);

  ++episode_;
  if (episode_ % hp_.target_sync_episodes == 0) SyncTarget();
  return log;
}

std::vector<EpisodeLog> Trainer::Train(const FeaturizedCorpus& train,
                                       const std::function<void(const EpisodeLog&)>& on_episode) {
  std::vector<EpisodeLog> logs;
  while (episode_ < hp_.training_episodes) {
    logs.push_back(RunEpisode(train));
    if (on_episode) on_episode(logs.back());
  }
  return logs;
}

std::optional<double> Trainer::UpdateStep() {
  auto sample = buffer_.Sample(hp_.batch_size, rng_);
  if (!sample) return std::nullopt;
  // The loss pass also yields the post-step recurrent state the targets need.
  const std::vector<double> q = ForwardBatch(main_, *sample, cache_);
  const std::vector<double> y =
      BatchTargets(*sample, main_, target_, hp_.discount, hp_.target_mode, &cache_);
  // Gradients start at zero and AdamStep clears them after every use.
  const double loss = TdLossFromQ(main_, *sample, q, y, &cache_);
  auto params = main_.Parameters();
  AdamStep(params, hp_.learning_rate, {.clear_gradients = true});
  return loss;
}

std::string OutcomeName(Outcome outcome) {
  switch (outcome) {
    case Outcome::kInProgress:
      return "in_progress";
    case Outcome::kClassified:
      return "classified";
    case Outcome::kUndecided:
      return "undecided";
  }
  return "?";
}

void WriteTrainingLogHeader(std::ostream& out) {
  out << "episode,total_reward,mean_loss,epsilon,moves,outcome,predicted,true_level\n";
}

void WriteTrainingLogRecord(std::ostream& out, const EpisodeLog& log) {
  out << log.episode << ',' << FormatDouble(log.total_reward) << ','
      << FormatDouble(log.mean_loss) << ',' << FormatDouble(log.epsilon) << ',' << log.moves
      << ',' << OutcomeName(log.outcome) << ',' << log.predicted << ',' << log.true_level << '\n';
}

}  // namespace textrl
