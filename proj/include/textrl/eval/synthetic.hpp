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

// Desk-scale stand-in corpus whose level is decodable from any aligned
// five-token window.
//
// Level k draws its words from band k: pseudo-words of k consonant-vowel
// syllables, so bands are disjoint. Each band has its own embedding cluster
// center and its own unigram frequency range (easier levels are more
// frequent). Every aligned window holds at least four own-band tokens; full
// windows may carry one token borrowed from another band as noise.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "textrl/eval/corpus.hpp"
#include "textrl/text/embeddings.hpp"
#include "textrl/text/ngram_model.hpp"

namespace textrl {

struct SyntheticOptions {
  int classes = 3;
  std::size_t texts_per_class = 200;
  std::size_t min_length = 20;
  std::size_t max_length = 60;
  std::size_t words_per_band = 40;
  std::size_t embedding_dim = kDefaultEmbeddingDim;
  double noise_probability = 0.5;  // per full window
  double center_scale = 1.0;
  double word_spread = 0.3;
  std::uint64_t seed = 0;

  void Validate() const;
};

struct SyntheticData {
  Corpus corpus;
  EmbeddingTable embeddings;
  NgramModel ngrams;
  std::vector<std::vector<std::string>> bands;  // bands[k - 1] = vocabulary of level k
};

SyntheticData GenerateSyntheticCorpus(const SyntheticOptions& options);

// Writes corpus.csv, embeddings.txt and ngrams.tsv under `dir` (created if
// needed). Output is byte-identical for equal options.
void WriteSyntheticData(const SyntheticData& data, const std::filesystem::path& dir);

}  // namespace textrl
