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

#include "textrl/eval/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <map>
#include <sstream>

#include "textrl/errors.hpp"
#include "textrl/numeric/rng.hpp"
#include "textrl/text/tokenizer.hpp"

namespace textrl {
namespace fs = std::filesystem;
namespace {

bool IsBlank(const std::string& s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

std::string JoinIssues(const std::vector<CorpusIssue>& issues) {
  std::ostringstream out;
  for (std::size_t i = 0; i < issues.size(); ++i) {
    if (i) out << '\n';
    out << issues[i].source;
    if (issues[i].line) out << ':' << issues[i].line;
    out << ": " << issues[i].message;
  }
  return out.str();
}

bool ParseLevel(std::string_view s, int& level) {
  const char* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, level);
  return ec == std::errc() && p == end && level >= 1;
}

// Trailing digits of a class directory name: "3" and "level3" both give 3.
bool LevelFromDirectory(const std::string& name, int& level) {
  std::size_t start = name.size();
  while (start > 0 && std::isdigit(static_cast<unsigned char>(name[start - 1]))) --start;
  return start < name.size() && ParseLevel(std::string_view(name).substr(start), level);
}

// Sets `classes` and reports levels in 1..max that never occur.
void FinishLevels(Corpus& corpus, const std::string& source, std::vector<CorpusIssue>& issues) {
  std::map<int, std::size_t> seen;
  for (const auto& t : corpus.texts) ++seen[t.level];
  corpus.classes = seen.empty() ? 0 : seen.rbegin()->first;
  for (int k = 1; k <= corpus.classes; ++k) {
    if (!seen.contains(k)) {
      issues.push_back({source, 0, "no texts for level " + std::to_string(k) +
                                       " (levels must cover 1.." +
                                       std::to_string(corpus.classes) + ")"});
    }
  }
  if (corpus.texts.empty() && issues.empty()) issues.push_back({source, 0, "corpus is empty"});
}

Corpus LoadDirectory(const fs::path& root) {
  Corpus corpus;
  corpus.name = root.filename().string();
  std::vector<CorpusIssue> issues;
  std::vector<fs::path> dirs;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (entry.is_directory()) dirs.push_back(entry.path());
  }
  std::sort(dirs.begin(), dirs.end());
  for (const auto& dir : dirs) {
    int level = 0;
    if (!LevelFromDirectory(dir.filename().string(), level)) {
      issues.push_back({dir.string(), 0, "unknown label: directory name must end in a level number"});
      continue;
    }
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
      if (entry.is_regular_file() && entry.path().extension() == ".txt") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& file : files) {
      std::ifstream in(file, std::ios::binary);
      std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
      if (!in && !in.eof()) {
        issues.push_back({file.string(), 0, "cannot read file"});
      } else if (IsBlank(text)) {
        issues.push_back({file.string(), 0, "empty file"});
      } else {
        corpus.texts.push_back(
            {dir.filename().string() + "/" + file.filename().string(), std::move(text), level});
      }
    }
  }
  FinishLevels(corpus, root.string(), issues);
  if (!issues.empty()) throw CorpusError(std::move(issues));
  return corpus;
}

}  // namespace

void Corpus::Validate() const {
  for (const auto& t : texts) {
    if (t.level < 1 || t.level > classes) {
      throw UsageError("text " + t.id + " has level " + std::to_string(t.level) +
                       " outside 1.." + std::to_string(classes));
    }
    if (IsBlank(t.text)) throw UsageError("text " + t.id + " is empty");
  }
}

CorpusError::CorpusError(std::vector<CorpusIssue> issues)
    : std::runtime_error(JoinIssues(issues)), issues_(std::move(issues)) {}

std::vector<CsvRecord> ParseCsv(std::istream& in, const std::string& source) {
  const std::string doc((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::vector<CsvRecord> records;
  std::size_t line = 1, i = 0;
  const std::size_t n = doc.size();
  while (i < n) {
    CsvRecord record;
    record.line = line;
    while (true) {
      std::string field;
      if (i < n && doc[i] == '"') {
        const std::size_t opened = line;
        ++i;
        while (true) {
          if (i >= n) throw ParseError(source, opened, "unterminated quoted field");
          if (doc[i] == '"') {
            if (i + 1 < n && doc[i + 1] == '"') {
              field += '"';
              i += 2;
              continue;
            }
            ++i;
            break;
          }
          if (doc[i] == '\n') ++line;
          field += doc[i++];
        }
        if (i < n && doc[i] != ',' && doc[i] != '\n' && doc[i] != '\r') {
          throw ParseError(source, line, "unexpected character after closing quote");
        }
      } else {
        while (i < n && doc[i] != ',' && doc[i] != '\n' && doc[i] != '\r') {
          if (doc[i] == '"') throw ParseError(source, line, "quote inside unquoted field");
          field += doc[i++];
        }
      }
      record.fields.push_back(std::move(field));
      if (i < n && doc[i] == ',') {
        ++i;
        continue;
      }
      if (i < n && doc[i] == '\r') ++i;
      if (i < n && doc[i] == '\n') {
        ++i;
        ++line;
      }
      break;
    }
    records.push_back(std::move(record));
  }
  return records;
}

Corpus ParseCorpusCsv(std::istream& in, const std::string& source) {
  std::vector<CsvRecord> records;
  try {
    records = ParseCsv(in, source);
  } catch (const ParseError& e) {
    throw CorpusError({{source, e.line(), e.what()}});
  }
  Corpus corpus;
  corpus.name = std::filesystem::path(source).stem().string();
  std::vector<CorpusIssue> issues;
  if (records.empty()) throw CorpusError({{source, 0, "empty file"}});
  const auto& header = records.front().fields;
  if (header.size() != 2 || header[0] != "label" || header[1] != "text") {
    throw CorpusError({{source, records.front().line, "header must be exactly `label,text`"}});
  }
  for (std::size_t r = 1; r < records.size(); ++r) {
    const CsvRecord& rec = records[r];
    const std::string row = "row " + std::to_string(r) + ": ";
    if (rec.fields.size() == 1 && rec.fields[0].empty()) continue;  // blank line
    if (rec.fields.size() != 2) {
      issues.push_back({source, rec.line,
                        row + "expected 2 fields, found " + std::to_string(rec.fields.size())});
      continue;
    }
    int level = 0;
    if (!ParseLevel(rec.fields[0], level)) {
      issues.push_back({source, rec.line, row + "unknown label '" + rec.fields[0] + "'"});
      continue;
    }
    if (IsBlank(rec.fields[1])) {
      issues.push_back({source, rec.line, row + "empty text"});
      continue;
    }
    corpus.texts.push_back({"row" + std::to_string(r), rec.fields[1], level});
  }
  FinishLevels(corpus, source, issues);
  if (!issues.empty()) throw CorpusError(std::move(issues));
  return corpus;
}

Corpus LoadCorpus(const fs::path& path, CorpusFormat format) {
  if (!fs::exists(path)) throw CorpusError({{path.string(), 0, "no such file or directory"}});
  if (format == CorpusFormat::kAuto) {
    format = fs::is_directory(path) ? CorpusFormat::kDirectory : CorpusFormat::kCsv;
  }
  if (format == CorpusFormat::kDirectory) return LoadDirectory(path);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CorpusError({{path.string(), 0, "cannot open file"}});
  return ParseCorpusCsv(in, path.string());
}

void WriteCorpusCsv(std::ostream& out, const Corpus& corpus) {
  out << "label,text\n";
  for (const auto& t : corpus.texts) {
    out << t.level << ",\"";
    for (char ch : t.text) {
      if (ch == '"') out << '"';
      out << ch;
    }
    out << "\"\n";
  }
}

CorpusSplit SplitCorpus(const Corpus& corpus, double fraction, std::uint64_t seed) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) throw UsageError("split fraction must lie in [0, 1]");
  CorpusSplit split;
  split.train.name = corpus.name + "-train";
  split.test.name = corpus.name + "-test";
  split.train.classes = split.test.classes = corpus.classes;

  std::map<int, std::vector<std::size_t>> by_level;
  for (std::size_t i = 0; i < corpus.size(); ++i) by_level[corpus.texts[i].level].push_back(i);

  Rng rng(seed);
  std::vector<std::size_t> train_idx, test_idx;
  for (auto& [level, idx] : by_level) {
    // Fisher-Yates with our own index draw, so splits match across standard
    // libraries.
    for (std::size_t i = idx.size(); i > 1; --i) std::swap(idx[i - 1], idx[UniformIndex(rng, i)]);
    const auto n_train = static_cast<std::size_t>(
        std::llround(fraction * static_cast<double>(idx.size())));
    std::sort(idx.begin(), idx.begin() + static_cast<long>(n_train));
    std::sort(idx.begin() + static_cast<long>(n_train), idx.end());
    train_idx.insert(train_idx.end(), idx.begin(), idx.begin() + static_cast<long>(n_train));
    test_idx.insert(test_idx.end(), idx.begin() + static_cast<long>(n_train), idx.end());
  }
  std::sort(train_idx.begin(), train_idx.end());
  std::sort(test_idx.begin(), test_idx.end());
  for (std::size_t i : train_idx) split.train.texts.push_back(corpus.texts[i]);
  for (std::size_t i : test_idx) split.test.texts.push_back(corpus.texts[i]);
  if (split.test.texts.empty()) split.warnings.push_back("test split is empty");
  if (split.train.texts.empty()) split.warnings.push_back("train split is empty");
  return split;
}

FeaturizedCorpus FeaturizeCorpus(const Corpus& corpus, const EmbeddingTable& embeddings,
                                 const NgramModel& ngrams) {
  FeaturizedCorpus out;
  out.classes = corpus.classes;
  out.ids.reserve(corpus.size());
  out.texts.reserve(corpus.size());
  out.levels.reserve(corpus.size());
  for (const auto& t : corpus.texts) {
    const TokenizedText tok = Tokenize(t.text);
    if (tok.tokens.empty()) throw UsageError("text " + t.id + " has no tokens");
    out.ids.push_back(t.id);
    out.texts.push_back(FeaturizeTokens(tok.tokens, embeddings, ngrams));
    out.levels.push_back(t.level);
  }
  return out;
}

}  // namespace textrl
