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

#include "textrl/eval/synthetic.hpp"

#include <cmath>
#include <fstream>
#include <algorithm>
#include <set>

#include "textrl/env/text_environment.hpp"
#include "textrl/errors.hpp"
#include "textrl/numeric/rng.hpp"
#include "textrl/text/tokenizer.hpp"

namespace textrl {
namespace {

// No 'y' (it counts as a vowel for syllables) and no 'e' (silent-e rule), so
// a word of s syllables has exactly s vowel groups.
constexpr char kConsonants[] = "bdfgklmnprstvz";
constexpr char kVowels[] = "aiou";

std::string PseudoWord(Rng& rng, std::size_t syllables) {
  std::string w;
  for (std::size_t s = 0; s < syllables; ++s) {
    w += kConsonants[UniformIndex(rng, sizeof(kConsonants) - 1)];
    w += kVowels[UniformIndex(rng, sizeof(kVowels) - 1)];
  }
  return w;
}

void WriteFile(const std::filesystem::path& path, const auto& write) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write " + path.string());
  write(out);
  if (!out) throw UsageError("failed writing " + path.string());
}

}  // namespace

void SyntheticOptions::Validate() const {
  if (classes < 2) throw UsageError("synthetic corpus needs at least 2 classes");
  if (texts_per_class == 0) throw UsageError("texts_per_class must be positive");
  if (min_length == 0 || min_length > max_length) {
    throw UsageError("length range must satisfy 0 < min <= max");
  }
  if (words_per_band == 0 || embedding_dim == 0) throw UsageError("empty vocabulary or embedding");
  if (!(noise_probability >= 0.0 && noise_probability <= 1.0)) {
    throw UsageError("noise_probability must lie in [0, 1]");
  }
  // 1-syllable bands have at most 14 * 4 distinct words.
  if (words_per_band > 56) throw UsageError("words_per_band must be at most 56");
}

SyntheticData GenerateSyntheticCorpus(const SyntheticOptions& opt) {
  opt.Validate();
  Rng rng(opt.seed);
  const auto K = static_cast<std::size_t>(opt.classes);
  SyntheticData data{{}, EmbeddingTable(opt.embedding_dim), {}, {}};

  // Vocabulary bands.
  data.bands.resize(K);
  for (std::size_t k = 0; k < K; ++k) {
    std::set<std::string> seen;
    while (data.bands[k].size() < opt.words_per_band) {
      std::string w = PseudoWord(rng, k + 1);
      if (seen.insert(w).second) data.bands[k].push_back(std::move(w));
    }
  }

  // Embeddings: cluster center per band plus per-word spread. FormatDouble
  // round-trips exactly, so the file reproduces these values bit for bit.
  for (std::size_t k = 0; k < K; ++k) {
    std::vector<double> center(opt.embedding_dim);
    for (double& v : center) v = opt.center_scale * StandardNormal(rng);
    for (const auto& w : data.bands[k]) {
      std::vector<double> vec(center);
      for (double& v : vec) v += opt.word_spread * StandardNormal(rng);
      data.embeddings.Insert(w, std::move(vec));
    }
  }

  // Unigram counts: band k in [10 * 8^(K-1-k), 20 * 8^(K-1-k)), disjoint.
  for (std::size_t k = 0; k < K; ++k) {
    const double base = 10.0 * std::pow(8.0, static_cast<double>(K - 1 - k));
    for (const auto& w : data.bands[k]) {
      const auto count = static_cast<std::uint64_t>(base * (1.0 + UniformUnit(rng)));
      data.ngrams.Set(1, std::span<const std::string>(&w, 1), count);
    }
  }

  // Texts, interleaved by class so ids stay in generation order.
  data.corpus.name = "synthetic";
  data.corpus.classes = opt.classes;
  for (std::size_t t = 0; t < opt.texts_per_class; ++t) {
    for (std::size_t k = 0; k < K; ++k) {
      const std::size_t length =
          opt.min_length + UniformIndex(rng, opt.max_length - opt.min_length + 1);
      std::vector<std::string> tokens;
      tokens.reserve(length);
      for (std::size_t start = 0; start < length; start += kWindowTokens) {
        const std::size_t end = std::min(length, start + kWindowTokens);
        std::size_t noisy = end;  // none
        if (end - start == kWindowTokens && UniformUnit(rng) < opt.noise_probability) {
          noisy = start + UniformIndex(rng, kWindowTokens);
        }
        for (std::size_t i = start; i < end; ++i) {
          std::size_t band = k;
          if (i == noisy) {
            band = UniformIndex(rng, K - 1);
            if (band >= k) ++band;
          }
          tokens.push_back(data.bands[band][UniformIndex(rng, opt.words_per_band)]);
        }
      }
      // Higher-order counts come from the generated text itself.
      for (std::size_t n = 2; n <= kMaxNgramOrder; ++n) {
        for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
          data.ngrams.Add(n, std::span<const std::string>(tokens).subspan(i, n));
        }
      }
      // Sentences of 6..12 words.
      std::string text;
      std::size_t until_stop = 6 + UniformIndex(rng, 7);
      for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i) text += ' ';
        text += tokens[i];
        if (--until_stop == 0 || i + 1 == tokens.size()) {
          text += '.';
          until_stop = 6 + UniformIndex(rng, 7);
        }
      }
      data.corpus.texts.push_back({"row" + std::to_string(data.corpus.texts.size() + 1),
                                   std::move(text), static_cast<int>(k + 1)});
    }
  }
  return data;
}

void WriteSyntheticData(const SyntheticData& data, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  WriteFile(dir / "corpus.csv", [&](std::ostream& out) { WriteCorpusCsv(out, data.corpus); });
  WriteFile(dir / "embeddings.txt",
            [&](std::ostream& out) { WriteEmbeddings(out, data.embeddings); });
  WriteFile(dir / "ngrams.tsv", [&](std::ostream& out) { data.ngrams.Write(out); });
}

}  // namespace textrl
