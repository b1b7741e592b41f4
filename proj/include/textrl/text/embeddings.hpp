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
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace textrl {

inline constexpr std::size_t kDefaultEmbeddingDim = 100;

struct EmbeddingLookup {
  std::span<const double> vector;  // zeros when unknown
  bool known = false;
};

// Pretrained word vectors, one shared dimension.
class EmbeddingTable {
 public:
  explicit EmbeddingTable(std::size_t dim = kDefaultEmbeddingDim);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return vectors_.size(); }

  // Throws ShapeError if the vector length differs from dim().
  void Insert(std::string token, std::vector<double> vector);
  EmbeddingLookup Lookup(const std::string& token) const;

  // Tokens in sorted order, for deterministic output.
  std::vector<std::string> SortedTokens() const;

 private:
  std::size_t dim_;
  std::unordered_map<std::string, std::vector<double>> vectors_;
  std::vector<double> zeros_;
};

// Text format: one `token v1 v2 ... vD` line per entry, single spaces.
// D is taken from the first line and enforced on the rest.
EmbeddingTable ParseEmbeddings(std::istream& in, const std::string& source = "<stream>");
EmbeddingTable LoadEmbeddings(const std::filesystem::path& path);
void WriteEmbeddings(std::ostream& out, const EmbeddingTable& table);

// Shortest decimal that parses back to exactly `v`.
std::string FormatDouble(double v);

}  // namespace textrl
