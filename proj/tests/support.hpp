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

// Helpers shared by the test binaries. Oracles here are written independently
// of the library code they check.

#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "textrl/eval/synthetic.hpp"
#include "textrl/numeric/rng.hpp"
#include "textrl/numeric/tensor.hpp"
#include "textrl/text/tokenizer.hpp"

namespace textrl::testing {

template <class Vector = Buffer>
Vector RandomVector(Rng& rng, std::size_t n, double lo = -1.0, double hi = 1.0) {
  Vector v(n);
  for (double& x : v) x = UniformReal(rng, lo, hi);
  return v;
}

inline Tensor RandomTensor(Rng& rng, Shape shape, double lo = -1.0, double hi = 1.0) {
  const std::size_t n = ShapeSize(shape);
  return Tensor(std::move(shape), RandomVector(rng, n, lo, hi));
}

// (f(x + h) - f(x - h)) / 2h, restoring x exactly.
inline double CentralDifference(const std::function<double()>& f, double& x, double h = 1e-6) {
  const double saved = x;
  x = saved + h;
  const double plus = f();
  x = saved - h;
  const double minus = f();
  x = saved;
  return (plus - minus) / (2.0 * h);
}

inline double MaxAbsDiff(std::span<const double> a, std::span<const double> b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

inline double MaxAbs(std::span<const double> a) {
  double worst = 0.0;
  for (double x : a) worst = std::max(worst, std::abs(x));
  return worst;
}

// Fresh empty directory under the system temp dir.
inline std::filesystem::path TempDir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("textrl-test-" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

// Pearson chi-square statistic of observed counts against a uniform
// expectation.
inline double ChiSquareUniform(std::span<const std::size_t> counts) {
  double total = 0.0;
  for (auto c : counts) total += static_cast<double>(c);
  const double expected = total / static_cast<double>(counts.size());
  double stat = 0.0;
  for (auto c : counts) {
    const double d = static_cast<double>(c) - expected;
    stat += d * d / expected;
  }
  return stat;
}

// Upper-tail p-value of the uniformity statistic above.
inline double ChiSquarePValue(std::span<const std::size_t> counts) {
  const boost::math::chi_squared dist(static_cast<double>(counts.size() - 1));
  return boost::math::cdf(boost::math::complement(dist, ChiSquareUniform(counts)));
}

// Fraction of texts whose first five tokens, voted by vocabulary band, name
// the text's level. Works from the raw text and the band lists only.
inline double FirstWindowMajorityAccuracy(const SyntheticData& data) {
  std::map<std::string, int> band_of;
  for (std::size_t k = 0; k < data.bands.size(); ++k) {
    for (const auto& w : data.bands[k]) band_of[w] = static_cast<int>(k + 1);
  }
  std::size_t correct = 0;
  for (const auto& t : data.corpus.texts) {
    const auto tokens = Tokenize(t.text).tokens;
    std::map<int, int> votes;
    for (std::size_t i = 0; i < tokens.size() && i < 5; ++i) {
      const auto it = band_of.find(tokens[i]);
      if (it != band_of.end()) ++votes[it->second];
    }
    int best = 0, best_votes = 0;
    for (const auto& [band, n] : votes) {
      if (n > best_votes) best = band, best_votes = n;
    }
    correct += best == t.level ? 1 : 0;
  }
  return static_cast<double>(correct) / static_cast<double>(data.corpus.size());
}

}  // namespace textrl::testing
