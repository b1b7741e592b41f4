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
#include <span>
#include <string>
#include <vector>

namespace textrl {

struct ClassMetrics {
  int level = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;    // texts whose true level is this class
  std::size_t predicted = 0;  // texts classified as this class
};

struct EvalMetrics {
  int classes = 0;
  std::size_t count = 0;
  double accuracy = 0.0;
  double rmse = 0.0;
  double text_seen_mean = 0.0;
  double moves_mean = 0.0;
  double undecided_fraction = 0.0;
  std::size_t undecided = 0;
  std::vector<ClassMetrics> per_class;
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double macro_f1 = 0.0;
  // confusion[true - 1][predicted - 1]; column `classes` counts undecided.
  std::vector<std::vector<std::size_t>> confusion;
};

// Largest absolute label error possible for a text of level `truth`:
// max(truth - 1, classes - truth). Charged to undecided texts.
int MaximumLabelError(int truth, int classes);

// Classification metrics. nullopt predictions are undecided: a miss for their
// true class that never counts towards any precision, with maximum label
// error in RMSE. Ratios with a zero denominator are 0. Efficiency fields
// (text_seen_mean, moves_mean) are left at 0. Throws UsageError on mismatched
// lengths, empty input, or levels outside 1..classes.
EvalMetrics ComputeMetrics(std::span<const std::optional<int>> predictions,
                           std::span<const int> labels, int classes);

// JSON object whose top-level fields mirror EvalMetrics.
void WriteMetricsJson(std::ostream& out, const EvalMetrics& metrics);
// Human-readable report with the same numbers (shortest round-trip digits).
void WriteMetricsTable(std::ostream& out, const EvalMetrics& metrics);

}  // namespace textrl
