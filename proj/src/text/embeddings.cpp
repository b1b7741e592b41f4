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

#include "textrl/text/embeddings.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "textrl/errors.hpp"

namespace textrl {

EmbeddingTable::EmbeddingTable(std::size_t dim) : dim_(dim), zeros_(dim, 0.0) {
  if (dim == 0) throw ShapeError("embedding dimension must be positive");
}

void EmbeddingTable::Insert(std::string token, std::vector<double> vector) {
  if (vector.size() != dim_) {
    throw ShapeError("embedding for '" + token + "' has " + std::to_string(vector.size()) +
                     " values, table dimension is " + std::to_string(dim_));
  }
  vectors_.insert_or_assign(std::move(token), std::move(vector));
}

EmbeddingLookup EmbeddingTable::Lookup(const std::string& token) const {
  auto it = vectors_.find(token);
  if (it == vectors_.end()) return {zeros_, false};
  return {it->second, true};
}

std::vector<std::string> EmbeddingTable::SortedTokens() const {
  std::vector<std::string> out;
  out.reserve(vectors_.size());
  for (const auto& [token, _] : vectors_) out.push_back(token);
  std::sort(out.begin(), out.end());
  return out;
}

EmbeddingTable ParseEmbeddings(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::pair<std::string, std::vector<double>>> rows;
  std::size_t dim = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto space = line.find(' ');
    if (space == std::string::npos || space == 0) {
      throw ParseError(source, line_no, "expected 'token v1 ... vD'");
    }
    std::string token = line.substr(0, space);
    std::vector<double> values;
    const char* p = line.data() + space + 1;
    const char* end = line.data() + line.size();
    while (p < end) {
      const char* field_end = std::find(p, end, ' ');
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(p, field_end, v);
      if (ec != std::errc() || ptr != field_end || !std::isfinite(v)) {
        throw ParseError(source, line_no,
                         "non-numeric field '" + std::string(p, field_end) + "'");
      }
      values.push_back(v);
      p = field_end == end ? end : field_end + 1;
    }
    if (dim == 0) dim = values.size();
    if (values.empty() || values.size() != dim) {
      throw ParseError(source, line_no,
                       "expected " + std::to_string(dim) + " values, found " +
                           std::to_string(values.size()));
    }
    rows.emplace_back(std::move(token), std::move(values));
  }
  if (dim == 0) throw ParseError(source, line_no, "no embeddings found");
  EmbeddingTable table(dim);
  for (auto& [token, values] : rows) table.Insert(std::move(token), std::move(values));
  return table;
}

EmbeddingTable LoadEmbeddings(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), 0, "cannot open embedding file");
  return ParseEmbeddings(in, path.string());
}

std::string FormatDouble(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

void WriteEmbeddings(std::ostream& out, const EmbeddingTable& table) {
  for (const auto& token : table.SortedTokens()) {
    out << token;
    for (double v : table.Lookup(token).vector) out << ' ' << FormatDouble(v);
    out << '\n';
  }
}

}  // namespace textrl
