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

#include "textrl/eval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

#include "json.hpp"
#include "textrl/errors.hpp"
#include "textrl/text/embeddings.hpp"

namespace textrl {
namespace {

double SafeRatio(double num, double den) { return den == 0.0 ? 0.0 : num / den; }

}  // namespace

int MaximumLabelError(int truth, int classes) { return std::max(truth - 1, classes - truth); }

EvalMetrics ComputeMetrics(std::span<const std::optional<int>> predictions,
                           std::span<const int> labels, int classes) {
  if (predictions.size() != labels.size()) {
    throw UsageError("predictions and labels differ in length");
  }
  if (labels.empty()) throw UsageError("cannot compute metrics on zero texts");
  if (classes < 1) throw UsageError("classes must be positive");
  const auto K = static_cast<std::size_t>(classes);

  EvalMetrics m;
  m.classes = classes;
  m.count = labels.size();
  m.confusion.assign(K, std::vector<std::size_t>(K + 1, 0));
  double squared = 0.0;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const int truth = labels[i];
    if (truth < 1 || truth > classes) throw UsageError("label outside 1..classes");
    const auto t = static_cast<std::size_t>(truth - 1);
    if (!predictions[i]) {
      ++m.undecided;
      ++m.confusion[t][K];
      const double e = MaximumLabelError(truth, classes);
      squared += e * e;
      continue;
    }
    const int pred = *predictions[i];
    if (pred < 1 || pred > classes) throw UsageError("prediction outside 1..classes");
    ++m.confusion[t][static_cast<std::size_t>(pred - 1)];
    if (pred == truth) ++correct;
    const double e = pred - truth;
    squared += e * e;
  }
  const auto n = static_cast<double>(m.count);
  m.accuracy = static_cast<double>(correct) / n;
  m.rmse = std::sqrt(squared / n);
  m.undecided_fraction = static_cast<double>(m.undecided) / n;

  for (std::size_t k = 0; k < K; ++k) {
    ClassMetrics c;
    c.level = static_cast<int>(k + 1);
    const auto tp = static_cast<double>(m.confusion[k][k]);
    for (std::size_t j = 0; j <= K; ++j) c.support += m.confusion[k][j];
    for (std::size_t j = 0; j < K; ++j) c.predicted += m.confusion[j][k];
    c.precision = SafeRatio(tp, static_cast<double>(c.predicted));
    c.recall = SafeRatio(tp, static_cast<double>(c.support));
    c.f1 = SafeRatio(2.0 * c.precision * c.recall, c.precision + c.recall);
    m.macro_precision += c.precision / static_cast<double>(K);
    m.macro_recall += c.recall / static_cast<double>(K);
    m.macro_f1 += c.f1 / static_cast<double>(K);
    m.per_class.push_back(c);
  }
  return m;
}

void WriteMetricsJson(std::ostream& out, const EvalMetrics& m) {
  nlohmann::ordered_json j;
  j["classes"] = m.classes;
  j["count"] = m.count;
  j["accuracy"] = m.accuracy;
  j["rmse"] = m.rmse;
  j["text_seen_mean"] = m.text_seen_mean;
  j["moves_mean"] = m.moves_mean;
  j["undecided_fraction"] = m.undecided_fraction;
  j["undecided"] = m.undecided;
  j["per_class"] = nlohmann::ordered_json::array();
  for (const auto& c : m.per_class) {
    j["per_class"].push_back({{"level", c.level},
                              {"precision", c.precision},
                              {"recall", c.recall},
                              {"f1", c.f1},
                              {"support", c.support},
                              {"predicted", c.predicted}});
  }
  j["macro"] = {{"precision", m.macro_precision}, {"recall", m.macro_recall}, {"f1", m.macro_f1}};
  j["confusion"] = m.confusion;
  out << j.dump(2) << '\n';
}

void WriteMetricsTable(std::ostream& out, const EvalMetrics& m) {
  out << "texts               " << m.count << '\n'
      << "accuracy            " << FormatDouble(m.accuracy) << '\n'
      << "rmse                " << FormatDouble(m.rmse) << '\n'
      << "text_seen_mean      " << FormatDouble(m.text_seen_mean) << " (fraction)\n"
      << "moves_mean          " << FormatDouble(m.moves_mean) << '\n'
      << "undecided_fraction  " << FormatDouble(m.undecided_fraction) << " (" << m.undecided
      << " texts)\n\n";
  out << std::left << std::setw(8) << "level" << std::setw(22) << "precision" << std::setw(22)
      << "recall" << std::setw(22) << "f1" << "support\n";
  for (const auto& c : m.per_class) {
    out << std::setw(8) << c.level << std::setw(22) << FormatDouble(c.precision) << std::setw(22)
        << FormatDouble(c.recall) << std::setw(22) << FormatDouble(c.f1) << c.support << '\n';
  }
  out << std::setw(8) << "macro" << std::setw(22) << FormatDouble(m.macro_precision)
      << std::setw(22) << FormatDouble(m.macro_recall) << std::setw(22)
      << FormatDouble(m.macro_f1) << m.count << '\n';
  out << std::right;
}

}  // namespace textrl
