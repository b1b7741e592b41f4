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

#include "textrl/eval/evaluate.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <ostream>

#include "textrl/agent/policy.hpp"
#include "textrl/errors.hpp"
#include "textrl/text/embeddings.hpp"

namespace textrl {

EpisodeRecord RunGreedyEpisode(const QNetwork& net, const TokenFeatureSequence& text,
                               int true_level, const RewardConfig& rewards,
                               const ActionSpace& actions) {
  TextEnvironment env(rewards, actions);
  Observation obs = env.Reset(text, true_level);
  RecurrentState state = RecurrentState::Zero();
  EpisodeRecord rec;
  rec.true_level = true_level;
  while (true) {
    QOutput out = ForwardQ(net, obs, state);
    StepResult step = env.Step(actions.FromIndex(Argmax(out.q)));
    rec.final_q = std::move(out.q);
    if (step.terminal) break;
    obs = std::move(step.observation);
    state = std::move(out.next);
  }
  rec.predicted = env.predicted_level();
  rec.moves = env.moves_taken();
  rec.text_seen = env.text_seen_fraction();
  rec.words_seen = static_cast<std::size_t>(
      std::llround(rec.text_seen * static_cast<double>(env.text_length())));
  return rec;
}

EvalMetrics SummarizeRecords(const std::vector<EpisodeRecord>& records, int classes) {
  std::vector<std::optional<int>> preds;
  std::vector<int> labels;
  double seen = 0.0, moves = 0.0;
  for (const auto& r : records) {
    preds.push_back(r.predicted);
    labels.push_back(r.true_level);
    seen += r.text_seen;
    moves += static_cast<double>(r.moves);
  }
  EvalMetrics m = ComputeMetrics(preds, labels, classes);
  m.text_seen_mean = seen / static_cast<double>(records.size());
  m.moves_mean = moves / static_cast<double>(records.size());
  return m;
}

Evaluation EvaluatePolicy(const QNetwork& net, const FeaturizedCorpus& test,
                          const RewardConfig& rewards, bool allow_backward, int jobs) {
  if (test.size() == 0) throw UsageError("test set is empty");
  const ActionSpace actions(test.classes, allow_backward);
  if (actions.size() != net.num_actions()) {
    throw ShapeError("network has " + std::to_string(net.num_actions()) +
                     " actions but the corpus needs " + std::to_string(actions.size()));
  }
  Evaluation eval;
  eval.records.resize(test.size());
  std::exception_ptr failure;
  const long n = static_cast<long>(test.size());
  const int threads = jobs > 0 ? jobs : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (long i = 0; i < n; ++i) {
    try {
      const auto k = static_cast<std::size_t>(i);
      EpisodeRecord rec = RunGreedyEpisode(net, test.texts[k], test.levels[k], rewards, actions);
      rec.id = test.ids[k];
      eval.records[k] = std::move(rec);
    } catch (...) {
#pragma omp critical(textrl_eval_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  eval.metrics = SummarizeRecords(eval.records, test.classes);
  return eval;
}

void WritePerTextCsv(std::ostream& out, const std::vector<EpisodeRecord>& records) {
  out << "text_id,true,predicted,moves,text_seen\n";
  for (const auto& r : records) {
    out << r.id << ',' << r.true_level << ',';
    if (r.predicted) {
      out << *r.predicted;
    } else {
      out << "UNDECIDED";
    }
    out << ',' << r.moves << ',' << FormatDouble(r.text_seen) << '\n';
  }
}

}  // namespace textrl
