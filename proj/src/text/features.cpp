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

#include "textrl/text/features.hpp"

#include <algorithm>

#include "textrl/errors.hpp"

namespace textrl {

TokenFeatureSequence FeaturizeTokens(std::span<const std::string> tokens,
                                     const EmbeddingTable& embeddings, const NgramModel& ngrams) {
  if (tokens.empty()) throw UsageError("cannot featurize an empty token list");
  TokenFeatureSequence seq;
  seq.tokens.assign(tokens.begin(), tokens.end());
  seq.feature_dim = embeddings.dim() + kMaxNgramOrder;
  seq.features.resize(tokens.size() * seq.feature_dim);
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    double* row = seq.features.data() + i * seq.feature_dim;
    const auto lookup = embeddings.Lookup(tokens[i]);
    if (!lookup.known) ++seq.unknown_tokens;
    std::copy(lookup.vector.begin(), lookup.vector.end(), row);
    for (std::size_t n = 1; n <= kMaxNgramOrder; ++n) {
      row[embeddings.dim() + n - 1] = NgramFeature(ngrams, tokens, i, n);
    }
  }
  return seq;
}

}  // namespace textrl
