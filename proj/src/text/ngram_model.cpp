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

#include "textrl/text/ngram_model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "textrl/errors.hpp"

namespace textrl {
namespace {

void CheckOrder(std::size_t n, std::size_t words) {
  if (n < 1 || n > kMaxNgramOrder) {
    throw UsageError("n-gram order must be in 1..5, got " + std::to_string(n));
  }
  if (words != n) {
    throw UsageError("n-gram of order " + std::to_string(n) + " needs " + std::to_string(n) +
                     " words, got " + std::to_string(words));
  }
}

}  // namespace

std::string NgramModel::Key(std::span<const std::string> words) {
  std::string key;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i) key += ' ';
    key += words[i];
  }
  return key;
}

void NgramModel::Set(std::size_t n, std::span<const std::string> words, std::uint64_t count) {
  CheckOrder(n, words.size());
  auto& table = counts_[n - 1];
  auto [it, inserted] = table.insert_or_assign(Key(words), count);
  if (!inserted && count < max_[n - 1]) {
    RecomputeMax(n);
  } else {
    max_[n - 1] = std::max(max_[n - 1], count);
  }
}

void NgramModel::Add(std::size_t n, std::span<const std::string> words, std::uint64_t count) {
  CheckOrder(n, words.size());
  auto& slot = counts_[n - 1][Key(words)];
  slot += count;
  max_[n - 1] = std::max(max_[n - 1], slot);
}

void NgramModel::RecomputeMax(std::size_t n) {
  std::uint64_t m = 0;
  for (const auto& [_, c] : counts_[n - 1]) m = std::max(m, c);
  max_[n - 1] = m;
}

std::uint64_t NgramModel::Count(std::span<const std::string> words) const {
  if (words.empty() || words.size() > kMaxNgramOrder) return 0;
  const auto& table = counts_[words.size() - 1];
  auto it = table.find(Key(words));
  return it == table.end() ? 0 : it->second;
}

std::uint64_t NgramModel::max_count(std::size_t n) const {
  if (n < 1 || n > kMaxNgramOrder) return 0;
  return max_[n - 1];
}

std::size_t NgramModel::size(std::size_t n) const {
  if (n < 1 || n > kMaxNgramOrder) return 0;
  return counts_[n - 1].size();
}

void NgramModel::Write(std::ostream& out) const {
  for (std::size_t n = 1; n <= kMaxNgramOrder; ++n) {
    std::vector<std::pair<std::string, std::uint64_t>> rows(counts_[n - 1].begin(),
                                                            counts_[n - 1].end());
    std::sort(rows.begin(), rows.end());
    for (const auto& [key, count] : rows) out << n << '\t' << key << '\t' << count << '\n';
  }
}

NgramModel ParseNgrams(std::istream& in, const std::string& source) {
  NgramModel model;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto tab1 = line.find('\t');
    const auto tab2 = tab1 == std::string::npos ? tab1 : line.find('\t', tab1 + 1);
    if (tab2 == std::string::npos || line.find('\t', tab2 + 1) != std::string::npos) {
      throw ParseError(source, line_no, "expected 'n<TAB>words<TAB>count'");
    }
    std::size_t n = 0;
    std::uint64_t count = 0;
    auto r1 = std::from_chars(line.data(), line.data() + tab1, n);
    auto r2 = std::from_chars(line.data() + tab2 + 1, line.data() + line.size(), count);
    if (r1.ec != std::errc() || r1.ptr != line.data() + tab1 || r2.ec != std::errc() ||
        r2.ptr != line.data() + line.size()) {
      throw ParseError(source, line_no, "non-numeric order or count");
    }
    std::vector<std::string> words;
    std::istringstream ws(line.substr(tab1 + 1, tab2 - tab1 - 1));
    for (std::string w; ws >> w;) words.push_back(w);
    if (n < 1 || n > kMaxNgramOrder || words.size() != n) {
      throw ParseError(source, line_no,
                       "order " + std::to_string(n) + " with " + std::to_string(words.size()) +
                           " words");
    }
    model.Set(n, words, count);
  }
  return model;
}

NgramModel LoadNgrams(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), 0, "cannot open n-gram file");
  return ParseNgrams(in, path.string());
}

double NgramFeature(const NgramModel& model, std::span<const std::string> tokens,
                    std::size_t position, std::size_t n) {
  if (n < 1 || n > kMaxNgramOrder) throw UsageError("n-gram order must be in 1..5");
  if (position >= tokens.size() || position + 1 < n) return 0.0;
  const std::uint64_t count = model.Count(tokens.subspan(position + 1 - n, n));
  const std::uint64_t max = model.max_count(n);
  if (count == 0 || max == 0) return 0.0;
  return std::log1p(static_cast<double>(count)) / std::log1p(static_cast<double>(max));
}

}  // namespace textrl
