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
#include <string>
#include <string_view>
#include <vector>

namespace textrl {

struct TokenizedText {
  std::vector<std::string> tokens;
  // Indices of tokens that close a sentence ('.', '!' or '?' in their
  // stripped trailing punctuation).
  std::vector<std::size_t> sentence_ends;

  // Sentence count for readability formulas: closed sentences plus one for
  // trailing words after the last terminator. Zero only for empty text.
  std::size_t sentence_count() const;
};

// Lowercase (ASCII), split on whitespace, strip leading/trailing ASCII
// punctuation, drop empty tokens.
TokenizedText Tokenize(std::string_view text);

}  // namespace textrl
