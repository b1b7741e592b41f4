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

// Traditional readability formulas. Gunning-Fog and Flesch-Dayani use the
// coefficients exactly as given with this toolkit's reference formulas:
//
//   Gunning-Fog   0.4 * (words / sentences) + 100 * (complex / words)
//   Flesch-Dayani 0.31 - 0.846 * (syllables / words) - 1.01 * (words / sentences)
//
// Both differ from the commonly published versions (Gunning-Fog usually scales
// the whole sum by 0.4; Dayani's intercept is usually 262.835); they are
// deliberately not "corrected".

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace textrl {

struct TextStats {
  std::size_t words = 0;
  std::size_t sentences = 0;
  std::size_t syllables = 0;
  std::size_t complex_words = 0;    // >= 3 syllables
  std::size_t difficult_words = 0;  // not on the easy-word list

  // Throws UsageError when words or sentences is zero, or a sub-count exceeds words.
  void Validate() const;
};

// Case-insensitive easy-word set for Dale-Chall.
class WordList {
 public:
  WordList() = default;
  explicit WordList(const std::vector<std::string>& words);

  bool Contains(std::string_view word) const;
  std::size_t size() const { return words_.size(); }

 private:
  std::unordered_set<std::string> words_;
};

// One word per line, UTF-8; blank lines ignored.
WordList ParseWordList(std::istream& in);
WordList LoadWordList(const std::filesystem::path& path);

// Vowel groups over a, e, i, o, u, y; a final silent 'e' is dropped unless it
// is the only group. Never less than 1.
std::size_t CountSyllables(std::string_view word);

// Statistics for a raw text. Without a word list, difficult_words counts
// every word.
TextStats ComputeTextStats(std::string_view text, const WordList* easy_words = nullptr);

double FleschKincaid(const TextStats& stats);
double GunningFog(const TextStats& stats);
double DaleChall(const TextStats& stats);
double FleschDayani(const TextStats& stats);

enum class Formula { kFleschKincaid, kGunningFog, kDaleChall, kFleschDayani };

inline constexpr Formula kAllFormulas[] = {Formula::kFleschKincaid, Formula::kGunningFog,
                                           Formula::kDaleChall, Formula::kFleschDayani};

std::string FormulaName(Formula f);  // "flesch-kincaid", "gunning-fog", ...
bool ParseFormula(std::string_view name, Formula& out);
double Score(Formula f, const TextStats& stats);

}  // namespace textrl
