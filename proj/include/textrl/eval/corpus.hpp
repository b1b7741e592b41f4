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
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "textrl/text/embeddings.hpp"
#include "textrl/text/features.hpp"
#include "textrl/text/ngram_model.hpp"

namespace textrl {

struct LabeledText {
  std::string id;  // "<subdir>/<file>" or "row<N>"
  std::string text;
  int level = 0;   // 1..classes
};

struct Corpus {
  std::string name;
  int classes = 0;
  std::vector<LabeledText> texts;

  std::size_t size() const { return texts.size(); }
  // Throws UsageError on a level outside 1..classes or an all-blank text.
  void Validate() const;
};

enum class CorpusFormat { kAuto, kDirectory, kCsv };

// One problem found while loading; `line` is 0 when it does not apply.
struct CorpusIssue {
  std::string source;
  std::size_t line = 0;
  std::string message;
};

// Raised once per load with every problem found, so a bad file can be fixed
// in one pass.
class CorpusError : public std::runtime_error {
 public:
  explicit CorpusError(std::vector<CorpusIssue> issues);
  const std::vector<CorpusIssue>& issues() const { return issues_; }

 private:
  std::vector<CorpusIssue> issues_;
};

// Directory layout: one subdirectory per class holding UTF-8 .txt files. A
// subdirectory's level is the integer its name ends with ("3", "level3").
// CSV layout: header `label,text`, RFC-4180 quoting, integer labels.
// In both cases the class count is the largest level and every level in
// 1..classes must occur. kAuto picks by whether `path` is a directory.
Corpus LoadCorpus(const std::filesystem::path& path, CorpusFormat format = CorpusFormat::kAuto);
Corpus ParseCorpusCsv(std::istream& in, const std::string& source = "<stream>");
void WriteCorpusCsv(std::ostream& out, const Corpus& corpus);

// Splits an RFC-4180 document into records of fields. Each record carries the
// 1-based line it starts on. Throws ParseError on an unterminated quote or
// stray characters after a closing quote.
struct CsvRecord {
  std::size_t line = 0;
  std::vector<std::string> fields;
};
std::vector<CsvRecord> ParseCsv(std::istream& in, const std::string& source = "<stream>");

struct CorpusSplit {
  Corpus train;
  Corpus test;
  std::vector<std::string> warnings;
};

// Stratified per class: round(fraction * n_k) texts of class k go to train.
// Deterministic in `seed`; partitions are disjoint and exhaustive.
CorpusSplit SplitCorpus(const Corpus& corpus, double fraction = 0.8, std::uint64_t seed = 0);

// Tokenizes and featurizes every text. Throws UsageError naming the text if
// it has no tokens.
FeaturizedCorpus FeaturizeCorpus(const Corpus& corpus, const EmbeddingTable& embeddings,
                                 const NgramModel& ngrams);

}  // namespace textrl
