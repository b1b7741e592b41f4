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
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "textrl/agent/q_network.hpp"
#include "textrl/env/text_environment.hpp"
#include "textrl/eval/metrics.hpp"
#include "textrl/text/features.hpp"

namespace textrl {

// Outcome of one greedy episode on one text.
struct EpisodeRecord {
  std::string id;
  int true_level = 0;
  std::optional<int> predicted;  // nullopt = undecided
  std::size_t moves = 0;
  std::size_t words_seen = 0;
  double text_seen = 0.0;
  std::vector<double> final_q;  // Q-values at the last decision
};

// One greedy (epsilon = 0) episode from a zero recurrent state.
EpisodeRecord RunGreedyEpisode(const QNetwork& net, const TokenFeatureSequence& text,
                               int true_level, const RewardConfig& rewards,
                               const ActionSpace& actions);

struct Evaluation {
  EvalMetrics metrics;
  std::vector<EpisodeRecord> records;  // in corpus order
};

// One greedy episode per text, fanned out over `jobs` threads (0 = OpenMP
// default). Results do not depend on the thread count.
Evaluation EvaluatePolicy(const QNetwork& net, const FeaturizedCorpus& test,
                          const RewardConfig& rewards, bool allow_backward = false,
                          int jobs = 0);

// Metrics from finished records, including the efficiency means.
EvalMetrics SummarizeRecords(const std::vector<EpisodeRecord>& records, int classes);

// CSV: text_id,true,predicted,moves,text_seen with UNDECIDED for undecided.
void WritePerTextCsv(std::ostream& out, const std::vector<EpisodeRecord>& records);

}  // namespace textrl
