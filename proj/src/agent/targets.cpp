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

#include "textrl/agent/targets.hpp"

#include <algorithm>
#include <cmath>

#include "textrl/agent/policy.hpp"
#include "textrl/errors.hpp"

namespace textrl {

double BootstrapTarget(double reward, bool terminal, std::span<const double> q_main_next,
                       std::span<const double> q_target_next, double discount, TargetMode mode) {
  if (terminal) return reward;
  if (q_target_next.empty()) throw UsageError("bootstrap needs target-network Q-values");
  if (mode == TargetMode::kVanilla) {
    return reward + discount * *std::max_element(q_target_next.begin(), q_target_next.end());
  }
  if (q_main_next.size() != q_target_next.size()) {
    throw UsageError("double Q target needs main-network Q-values for every action");
  }
  return reward + discount * q_target_next[Argmax(q_main_next)];
}

NextStateValues EvaluateNextState(const Transition& t, const QNetwork& main,
                                  const QNetwork& target) {
  NextStateValues out;
  const QOutput main_s = ForwardQ(main, t.state, t.recurrent);
  out.main = ForwardQ(main, t.next_state, main_s.next).q;
  out.target = ForwardQ(target, t.next_state, main_s.next).q;
  return out;
}

double ComputeTarget(const Transition& t, const QNetwork& main, const QNetwork& target,
                     double discount, TargetMode mode) {
  if (main.num_actions() != target.num_actions()) {
    throw ShapeError("main and target networks differ in action count");
  }
  if (t.terminal) return t.reward;
  const NextStateValues next = EvaluateNextState(t, main, target);
  return BootstrapTarget(t.reward, false, next.main, next.target, discount, mode);
}

double TdLoss(std::span<const Transition* const> batch, const QNetwork& main,
              const QNetwork& target, double discount, TargetMode mode) {
  if (batch.empty()) throw UsageError("td_loss on an empty batch");
  double total = 0.0;
  for (const Transition* t : batch) {
    const double y = ComputeTarget(*t, main, target, discount, mode);
    const double q = ForwardQ(main, t->state, t->recurrent).q.at(t->action);
    total += (y - q) * (y - q);
  }
  return total / static_cast<double>(batch.size());
}

namespace {

// Copies one row per selected transition into a flat [rows, width] buffer.
template <typename Get>
std::vector<double> Gather(std::span<const std::size_t> rows, std::size_t width, Get&& get) {
  std::vector<double> out(rows.size() * width);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    std::span<const double> src = get(rows[r]);
    if (src.size() != width) throw ShapeError("transition buffer has the wrong width");
    std::copy(src.begin(), src.end(), out.begin() + static_cast<long>(r * width));
  }
  return out;
}

struct BatchInputs {
  std::vector<double> obs, h, c;
};

BatchInputs GatherStates(std::span<const Transition* const> batch,
                         std::span<const std::size_t> rows) {
  constexpr std::size_t units = architecture::kRecurrentUnits;
  constexpr std::size_t width = architecture::kObservationSize;
  return {Gather(rows, width, [&](std::size_t i) { return std::span<const double>(batch[i]->state.window); }),
          Gather(rows, units, [&](std::size_t i) { return std::span<const double>(batch[i]->recurrent.h); }),
          Gather(rows, units, [&](std::size_t i) { return std::span<const double>(batch[i]->recurrent.c); })};
}

}  // namespace

std::vector<double> ForwardBatch(const QNetwork& main, std::span<const Transition* const> batch,
                                 QNetwork::Cache& cache) {
  constexpr std::size_t units = architecture::kRecurrentUnits;
  const std::size_t n = batch.size();
  if (n == 0) throw UsageError("empty transition batch");
  std::vector<std::size_t> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;
  const BatchInputs in = GatherStates(batch, all);
  std::vector<double> q(n * main.num_actions()), h1(n * units), c1(n * units);
  main.Forward(n, in.obs, in.h, in.c, q, h1, c1, &cache);
  return q;
}

std::vector<double> BatchTargets(std::span<const Transition* const> batch, const QNetwork& main,
                                 const QNetwork& target, double discount, TargetMode mode,
                                 const QNetwork::Cache* stepped) {
  constexpr std::size_t units = architecture::kRecurrentUnits;
  const std::size_t actions = main.num_actions();
  if (target.num_actions() != actions) {
    throw ShapeError("main and target networks differ in action count");
  }
  if (stepped && stepped->batch != batch.size()) {
    throw ShapeError("stepped cache does not match the batch");
  }
  std::vector<double> y(batch.size());
  std::vector<std::size_t> open;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    y[i] = batch[i]->reward;
    if (!batch[i]->terminal) open.push_back(i);
  }
  const std::size_t m = open.size();
  if (m == 0) return y;

  // Step the main network on s, then read s' from the state it reached.
  Buffer h1(m * units), c1(m * units);
  if (stepped) {
    for (std::size_t r = 0; r < m; ++r) {
      std::copy_n(stepped->h_out.begin() + static_cast<long>(open[r] * units), units,
                  h1.begin() + static_cast<long>(r * units));
      std::copy_n(stepped->c_out.begin() + static_cast<long>(open[r] * units), units,
                  c1.begin() + static_cast<long>(r * units));
    }
  } else {
    const BatchInputs in = GatherStates(batch, open);
    std::vector<double> q(m * actions);
    main.Forward(m, in.obs, in.h, in.c, q, h1, c1);
  }
  const std::vector<double> next = Gather(open, architecture::kObservationSize, [&](std::size_t i) {
    return std::span<const double>(batch[i]->next_state.window);
  });
  Buffer q_target(m * actions), q_main, h2(m * units), c2(m * units);
  target.Forward(m, next, h1, c1, q_target, h2, c2);
  if (mode == TargetMode::kDouble) {
    q_main.resize(m * actions);
    main.Forward(m, next, h1, c1, q_main, h2, c2);
  }
  for (std::size_t r = 0; r < m; ++r) {
    std::span<const double> qt(q_target.data() + r * actions, actions), qm;
    if (!q_main.empty()) qm = std::span<const double>(q_main.data() + r * actions, actions);
    y[open[r]] = BootstrapTarget(batch[open[r]]->reward, false, qm, qt, discount, mode);
  }
  return y;
}

double TdLossFromQ(QNetwork& main, std::span<const Transition* const> batch,
                   std::span<const double> q, std::span<const double> targets,
                   const QNetwork::Cache* backprop) {
  const std::size_t n = batch.size(), actions = main.num_actions();
  if (n == 0) throw UsageError("td_loss on an empty batch");
  if (targets.size() != n || q.size() != n * actions) {
    throw ShapeError("one target and one Q row per transition required");
  }
  Buffer d_q(n * actions, 0.0);
  double loss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t a = batch[i]->action;
    if (a >= actions) throw UsageError("transition action outside the action space");
    const double diff = q[i * actions + a] - targets[i];
    loss += diff * diff;
    d_q[i * actions + a] = 2.0 * diff / static_cast<double>(n);
  }
  loss /= static_cast<double>(n);
  if (!std::isfinite(loss)) throw NumericError("non-finite TD loss");
  if (backprop) main.Backward(*backprop, d_q);
  return loss;
}

double TdLossAgainstTargets(QNetwork& main, std::span<const Transition* const> batch,
                            std::span<const double> targets, bool backprop,
                            QNetwork::Cache& cache) {
  const std::vector<double> q = ForwardBatch(main, batch, cache);
  if (backprop) main.ZeroGrad();
  return TdLossFromQ(main, batch, q, targets, backprop ? &cache : nullptr);
}

}  // namespace textrl
