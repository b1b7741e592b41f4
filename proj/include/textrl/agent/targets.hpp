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
#include <vector>

#include "textrl/agent/q_network.hpp"
#include "textrl/agent/replay_buffer.hpp"

namespace textrl {

enum class TargetMode {
  kDouble,   // r + discount * Q_target(s', argmax_a Q_main(s', a))
  kVanilla,  // r + discount * max_a Q_target(s', a)
};

// Terminal transitions return the reward alone. q_main_next is only read in
// double mode and may be empty otherwise.
double BootstrapTarget(double reward, bool terminal, std::span<const double> q_main_next,
                       std::span<const double> q_target_next, double discount, TargetMode mode);

// Q-values at s' for both networks. The main network steps its recurrent cell
// on s from the stored pre-step state; both networks then evaluate s' from
// that one resulting state.
struct NextStateValues {
  std::vector<double> main;
  std::vector<double> target;
};
NextStateValues EvaluateNextState(const Transition& t, const QNetwork& main,
                                  const QNetwork& target);

double ComputeTarget(const Transition& t, const QNetwork& main, const QNetwork& target,
                     double discount, TargetMode mode);

// Mean over the batch of (target - Q_main(s, a))^2, one transition at a
// time. Value only; reference for the batched route below.
double TdLoss(std::span<const Transition* const> batch, const QNetwork& main,
              const QNetwork& target, double discount, TargetMode mode);

// Batched Q_main(s, .) for every transition, one pass recorded in `cache`.
// Returns [batch, actions].
std::vector<double> ForwardBatch(const QNetwork& main, std::span<const Transition* const> batch,
                                 QNetwork::Cache& cache);

// Batched bootstrap targets, one per transition; only non-terminal
// transitions run the next-state passes. `stepped`, when given, must be the
// cache of ForwardBatch(main, batch); its recurrent outputs then stand in for
// re-running the main network on s.
std::vector<double> BatchTargets(std::span<const Transition* const> batch, const QNetwork& main,
                                 const QNetwork& target, double discount, TargetMode mode,
                                 const QNetwork::Cache* stepped = nullptr);

// Mean squared error of the taken actions' Q-values `q` (from ForwardBatch)
// against fixed targets. With `backprop`, d(loss)/d(parameters) through the
// pass recorded there is accumulated into main's gradients; callers zero them
// first. Throws NumericError on a non-finite loss.
double TdLossFromQ(QNetwork& main, std::span<const Transition* const> batch,
                   std::span<const double> q, std::span<const double> targets,
                   const QNetwork::Cache* backprop = nullptr);

// ForwardBatch followed by TdLossFromQ; with `backprop` the gradients are
// zeroed first, so they hold exactly this batch's gradient afterwards.
double TdLossAgainstTargets(QNetwork& main, std::span<const Transition* const> batch,
                            std::span<const double> targets, bool backprop,
                            QNetwork::Cache& cache);

}  // namespace textrl
