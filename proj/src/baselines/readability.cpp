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

#include "textrl/baselines/readability.hpp"

#include <cctype>
#include <fstream>
#include <istream>

#include "textrl/errors.hpp"
#include "textrl/text/tokenizer.hpp"

namespace textrl {
namespace {

std::string Lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (static_cast<unsigned char>(c) < 0x80) c = static_cast<char>(std::tolower(c));
  }
  return out;
}

bool IsVowel(char c) {
  switch (std::tolower(static_cast<unsigned char>(c))) {
    case 'a': case 'e': case 'i': case 'o': case 'u': case 'y':
      return true;
    default:
      return false;
  }
}

double Ratio(std::size_t a, std::size_t b) {
  return static_cast<double>(a) / static_cast<double>(b);
}

}  // namespace

void TextStats::Validate() const {
  if (words == 0) throw UsageError("readability formulas need at least one word");
  if (sentences == 0) throw UsageError("readability formulas need at least one sentence");
  if (complex_words > words || difficult_words > words) {
    throw UsageError("complex/difficult word counts cannot exceed the word count");
  }
}

WordList::WordList(const std::vector<std::string>& words) {
  for (const auto& w : words) words_.insert(Lower(w));
}

bool WordList::Contains(std::string_view word) const { return words_.contains(Lower(word)); }

WordList ParseWordList(std::istream& in) {
  std::vector<std::string> words;
  for (std::string line; std::getline(in, line);) {
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) line.pop_back();
    std::size_t start = 0;
    while (start < line.size() && std::isspace(static_cast<unsigned char>(line[start]))) ++start;
    if (start < line.size()) words.push_back(line.substr(start));
  }
  return WordList(words);
}

WordList LoadWordList(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), 0, "cannot open word list");
  return ParseWordList(in);
}

std::size_t CountSyllables(std::string_view word) {
  std::size_t groups = 0;
  bool in_group = false;
  for (char c : word) {
    const bool v = IsVowel(c);
    if (v && !in_group) ++groups;
    in_group = v;
  }
  const std::size_t n = word.size();
  const bool silent_e = n >= 2 && std::tolower(static_cast<unsigned char>(word[n - 1])) == 'e' &&
                        !IsVowel(word[n - 2]);
  if (silent_e && groups > 1) --groups;
  return groups == 0 ? 1 : groups;
}

TextStats ComputeTextStats(std::string_view text, const WordList* easy_words) {
  const TokenizedText tok = Tokenize(text);
  TextStats stats;
  stats.words = tok.tokens.size();
  stats.sentences = tok.sentence_count();
  for (const auto& w : tok.tokens) {
    const std::size_t s = CountSyllables(w);
    stats.syllables += s;
    if (s >= 3) ++stats.complex_words;
    if (!easy_words || !easy_words->Contains(w)) ++stats.difficult_words;
  }
  return stats;
}

double FleschKincaid(const TextStats& s) {
  s.Validate();
  return 0.39 * Ratio(s.words, s.sentences) + 11.8 * Ratio(s.syllables, s.words) - 15.59;
}

double GunningFog(const TextStats& s) {
  s.Validate();
  return 0.4 * Ratio(s.words, s.sentences) + 100.0 * Ratio(s.complex_words, s.words);
}

double DaleChall(const TextStats& s) {
  s.Validate();
  return 15.79 * Ratio(s.difficult_words, s.words) + 0.0496 * Ratio(s.words, s.sentences);
}

double FleschDayani(const TextStats& s) {
  s.Validate();
  return 0.31 - 0.846 * Ratio(s.syllables, s.words) - 1.01 * Ratio(s.words, s.sentences);
}

std::string FormulaName(Formula f) {
  switch (f) {
    case Formula::kFleschKincaid:
      return "flesch-kincaid";
    case Formula::kGunningFog:
      return "gunning-fog";
    case Formula::kDaleChall:
      return "dale-chall";
    case Formula::kFleschDayani:
      return "flesch-dayani";
  }
  return "?";
}

bool ParseFormula(std::string_view name, Formula& out) {
  for (Formula f : kAllFormulas) {
    if (FormulaName(f) == name) {
      out = f;
      return true;
    }
  }
  return false;
}

double Score(Formula f, const TextStats& stats) {
  switch (f) {
    case Formula::kFleschKincaid:
      return FleschKincaid(stats);
    case Formula::kGunningFog:
      return GunningFog(stats);
    case Formula::kDaleChall:
      return DaleChall(stats);
    case Formula::kFleschDayani:
      return FleschDayani(stats);
  }
  return 0.0;
}

}  // namespace textrl
