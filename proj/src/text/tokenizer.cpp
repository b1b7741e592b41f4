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

#include "textrl/text/tokenizer.hpp"

#include <cctype>

namespace textrl {
namespace {

bool IsSpace(unsigned char c) { return std::isspace(c) != 0; }
bool IsPunct(unsigned char c) { return c < 0x80 && std::ispunct(c) != 0; }
bool IsTerminator(char c) { return c == '.' || c == '!' || c == '?'; }

}  // namespace

std::size_t TokenizedText::sentence_count() const {
  if (tokens.empty()) return 0;
  const bool trailing = sentence_ends.empty() || sentence_ends.back() + 1 < tokens.size();
  return sentence_ends.size() + (trailing ? 1 : 0);
}

TokenizedText Tokenize(std::string_view text) {
  TokenizedText out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && IsSpace(static_cast<unsigned char>(text[i]))) ++i;
    const std::size_t start = i;
    while (i < text.size() && !IsSpace(static_cast<unsigned char>(text[i]))) ++i;
    std::string_view raw = text.substr(start, i - start);
    if (raw.empty()) continue;

    std::size_t lo = 0, hi = raw.size();
    while (lo < hi && IsPunct(static_cast<unsigned char>(raw[lo]))) ++lo;
    while (hi > lo && IsPunct(static_cast<unsigned char>(raw[hi - 1]))) --hi;
    bool closes = false;
    for (std::size_t k = hi; k < raw.size(); ++k) closes = closes || IsTerminator(raw[k]);

    if (lo < hi) {
      std::string token(raw.substr(lo, hi - lo));
      for (char& c : token) {
        if (static_cast<unsigned char>(c) < 0x80) c = static_cast<char>(std::tolower(c));
      }
      out.tokens.push_back(std::move(token));
    }
    // A bare "." after a word still closes that word's sentence.
    if (closes && !out.tokens.empty() &&
        (out.sentence_ends.empty() || out.sentence_ends.back() != out.tokens.size() - 1)) {
      out.sentence_ends.push_back(out.tokens.size() - 1);
    }
  }
  return out;
}

}  // namespace textrl
