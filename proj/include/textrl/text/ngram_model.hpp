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

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>

namespace textrl {

inline constexpr std::size_t kMaxNgramOrder = 5;

// Raw n-gram counts for n = 1..5; no smoothing or backoff.
class NgramModel {
 public:
  // Throws UsageError unless 1 <= n <= 5. Re-adding a key replaces its count.
  void Set(std::size_t n, std::span<const std::string> words, std::uint64_t count);
  void Add(std::size_t n, std::span<const std::string> words, std::uint64_t count = 1);

  std::uint64_t Count(std::span<const std::string> words) const;
  std::uint64_t max_count(std::size_t n) const;
  std::size_t size(std::size_t n) const;

  // Emits every entry sorted by (n, key).
  void Write(std::ostream& out) const;

 private:
  void RecomputeMax(std::size_t n);
  static std::string Key(std::span<const std::string> words);

  std::array<std::unordered_map<std::string, std::uint64_t>, kMaxNgramOrder> counts_;
  std::array<std::uint64_t, kMaxNgramOrder> max_{};
};

// TSV: `n<TAB>w1 w2 ... wn<TAB>count` per line.
NgramModel ParseNgrams(std::istream& in, const std::string& source = "<stream>");
NgramModel LoadNgrams(const std::filesystem::path& path);

// log(1 + count(g)) / log(1 + max_count_n) for the n-gram g ending at
// `position`; 0 when g would start before the text or was never seen.
double NgramFeature(const NgramModel& model, std::span<const std::string> tokens,
                    std::size_t position, std::size_t n);

}  // namespace textrl
