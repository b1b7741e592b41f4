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
#include <span>
#include <string>
#include <vector>

#include "textrl/text/embeddings.hpp"
#include "textrl/text/ngram_model.hpp"

namespace textrl {

// Per-token feature rows: embedding followed by the five n-gram features.
struct TokenFeatureSequence {
  std::vector<std::string> tokens;
  std::size_t feature_dim = 0;
  std::vector<double> features;  // [tokens.size(), feature_dim]
  std::size_t unknown_tokens = 0;

  std::size_t size() const { return tokens.size(); }
  bool empty() const { return tokens.empty(); }
  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(features).subspan(i * feature_dim, feature_dim);
  }
};

// A labelled corpus after tokenization and featurization.
struct FeaturizedCorpus {
  int classes = 0;
  std::vector<std::string> ids;
  std::vector<TokenFeatureSequence> texts;
  std::vector<int> levels;  // 1..classes

  std::size_t size() const { return texts.size(); }
};

// Throws UsageError on an empty token list.
TokenFeatureSequence FeaturizeTokens(std::span<const std::string> tokens,
                                     const EmbeddingTable& embeddings, const NgramModel& ngrams);

}  // namespace textrl
