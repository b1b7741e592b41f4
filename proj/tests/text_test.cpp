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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "support.hpp"
#include "textrl/errors.hpp"
#include "textrl/text/embeddings.hpp"
#include "textrl/text/features.hpp"
#include "textrl/text/ngram_model.hpp"
#include "textrl/text/tokenizer.hpp"

using namespace textrl;

namespace {

std::string EmbeddingLine(const std::string& token, std::size_t dim, double base) {
  std::string line = token;
  for (std::size_t i = 0; i < dim; ++i) line += " " + FormatDouble(base + 0.01 * static_cast<double>(i));
  return line + "\n";
}

using Words = std::vector<std::string>;

}  // namespace

TEST_CASE("tokenize") {
  SUBCASE("simple sentence") {
    const auto t = Tokenize("The cat sat.");
    CHECK(t.tokens == Words{"the", "cat", "sat"});
    CHECK(t.sentence_ends.size() == 1);
    CHECK(t.sentence_count() == 1);
  }
  SUBCASE("empty text") {
    const auto t = Tokenize("");
    CHECK(t.tokens.empty());
    CHECK(t.sentence_count() == 0);
  }
  SUBCASE("inner apostrophes survive, two boundaries") {
    const auto t = Tokenize("Don't stop! Go.");
    CHECK(t.tokens == Words{"don't", "stop", "go"});
    CHECK(t.sentence_ends == std::vector<std::size_t>{1, 2});
  }
  SUBCASE("punctuation-only tokens are dropped") {
    const auto t = Tokenize("  hello -- (world)  ...  ");
    CHECK(t.tokens == Words{"hello", "world"});
  }
  SUBCASE("trailing words form a sentence") {
    CHECK(Tokenize("One. Two three").sentence_count() == 2);
  }
}

TEST_CASE("embedding files") {
  SUBCASE("two tokens of dimension 100") {
    std::istringstream in(EmbeddingLine("cat", 100, 0.5) + EmbeddingLine("dog", 100, -0.5));
    const EmbeddingTable table = ParseEmbeddings(in);
    CHECK(table.size() == 2);
    CHECK(table.dim() == 100);
    const auto cat = table.Lookup("cat");
    CHECK(cat.known);
    CHECK(cat.vector[0] == 0.5);
    CHECK(cat.vector[99] == doctest::Approx(0.5 + 0.99));
  }
  SUBCASE("unknown token gives zeros and a flag") {
    std::istringstream in(EmbeddingLine("cat", 4, 0.5));
    const EmbeddingTable table = ParseEmbeddings(in);
    const auto miss = table.Lookup("zebra");
    CHECK_FALSE(miss.known);
    CHECK(miss.vector.size() == 4);
    CHECK(testing::MaxAbs(miss.vector) == 0.0);
  }
  SUBCASE("malformed line 7 is cited") {
    std::string doc;
    for (int i = 0; i < 6; ++i) doc += EmbeddingLine("w" + std::to_string(i), 3, 0.1);
    doc += "w6 0.1 abc 0.3\n";
    std::istringstream in(doc);
    try {
      ParseEmbeddings(in, "vec.txt");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 7);
      CHECK(std::string(e.what()).find("vec.txt:7") != std::string::npos);
    }
  }
  SUBCASE("inconsistent dimension is rejected with its line") {
    std::istringstream in(EmbeddingLine("a", 3, 0.0) + EmbeddingLine("b", 4, 0.0));
    try {
      ParseEmbeddings(in);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
    }
  }
  SUBCASE("write then parse reproduces every value") {
    EmbeddingTable table(3);
    table.Insert("x", {0.1, 1.0 / 3.0, -2.5e-7});
    table.Insert("a", {1e300, -0.0, 42.0});
    std::ostringstream out;
    WriteEmbeddings(out, table);
    std::istringstream in(out.str());
    const EmbeddingTable back = ParseEmbeddings(in);
    for (const auto& tok : table.SortedTokens()) {
      const auto a = table.Lookup(tok).vector;
      const auto b = back.Lookup(tok).vector;
      CHECK(std::vector<double>(a.begin(), a.end()) == std::vector<double>(b.begin(), b.end()));
    }
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(LoadEmbeddings("/nonexistent/emb.txt"), ParseError);
  }
}

TEST_CASE("n-gram model and features") {
  NgramModel model;
  const Words text{"the", "cat", "sat", "on", "the", "mat"};
  model.Set(1, Words{"the"}, 100);
  model.Set(1, Words{"cat"}, 10);
  model.Set(2, Words{"the", "cat"}, 4);
  model.Set(2, Words{"cat", "sat"}, 9);
  model.Set(3, Words{"the", "cat", "sat"}, 2);

  SUBCASE("most frequent unigram scores 1") {
    CHECK(NgramFeature(model, text, 0, 1) == 1.0);
    CHECK(NgramFeature(model, text, 1, 1) == doctest::Approx(std::log(11.0) / std::log(101.0)));
  }
  SUBCASE("unseen n-gram scores 0") { CHECK(NgramFeature(model, text, 3, 2) == 0.0); }
  SUBCASE("window before the text start scores 0") {
    CHECK(NgramFeature(model, text, 0, 3) == 0.0);
    CHECK(NgramFeature(model, text, 2, 3) == doctest::Approx(std::log(3.0) / std::log(3.0)));
  }
  SUBCASE("monotone in the count with the maximum fixed") {
    double last = -1.0;
    for (std::uint64_t c = 0; c <= 9; ++c) {
      NgramModel m = model;
      m.Set(2, Words{"the", "cat"}, c);
      const double f = NgramFeature(m, text, 1, 2);
      CHECK(f >= last);
      CHECK(f <= 1.0);
      last = f;
    }
  }
  SUBCASE("max count tracks the largest entry") {
    CHECK(model.max_count(1) == 100);
    model.Set(1, Words{"the"}, 5);
    CHECK(model.max_count(1) == 10);
  }
  SUBCASE("tsv round trip and errors") {
    std::ostringstream out;
    model.Write(out);
    std::istringstream in(out.str());
    const NgramModel back = ParseNgrams(in);
    CHECK(back.Count(Words{"cat", "sat"}) == 9);
    CHECK(back.size(2) == 2);
    std::istringstream bad("1\tthe\t5\n2\tthe cat\tmany\n");
    try {
      ParseNgrams(bad, "n.tsv");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
    }
    std::istringstream wrong_order("2\tthe\t5\n");
    CHECK_THROWS_AS(ParseNgrams(wrong_order), ParseError);
    CHECK_THROWS_AS(model.Set(6, Words{"a", "b", "c", "d", "e", "f"}, 1), UsageError);
  }
}

TEST_CASE("featurize tokens") {
  EmbeddingTable emb(100);
  emb.Insert("cat", std::vector<double>(100, 0.25));
  emb.Insert("sat", std::vector<double>(100, -0.5));
  NgramModel ngrams;
  ngrams.Set(1, Words{"cat"}, 7);
  ngrams.Set(1, Words{"sat"}, 3);
  ngrams.Set(2, Words{"cat", "sat"}, 2);
  ngrams.Set(2, Words{"sat", "cat"}, 5);

  SUBCASE("single known token is a 105-vector") {
    const auto seq = FeaturizeTokens(Words{"cat"}, emb, ngrams);
    REQUIRE(seq.size() == 1);
    CHECK(seq.feature_dim == 105);
    CHECK(seq.row(0)[0] == 0.25);
    CHECK(seq.row(0)[100] == 1.0);
    CHECK(seq.row(0)[101] == 0.0);
  }
  SUBCASE("token absent from both resources is all zeros") {
    const auto seq = FeaturizeTokens(Words{"zebra"}, emb, ngrams);
    CHECK(testing::MaxAbs(seq.row(0)) == 0.0);
    CHECK(seq.unknown_tokens == 1);
  }
  SUBCASE("second token's bigram feature uses the pair") {
    const auto seq = FeaturizeTokens(Words{"cat", "sat"}, emb, ngrams);
    CHECK(seq.row(1)[101] == doctest::Approx(std::log(3.0) / std::log(6.0)));
    CHECK(seq.row(0)[101] == 0.0);
  }
  SUBCASE("features lie in [0, 1] and the function is pure") {
    const Words words{"cat", "sat", "cat", "dog", "sat"};
    const auto a = FeaturizeTokens(words, emb, ngrams);
    const auto b = FeaturizeTokens(words, emb, ngrams);
    CHECK(a.features == b.features);
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a.row(i).size() == 105);
      for (std::size_t j = 100; j < 105; ++j) {
        CHECK(a.row(i)[j] >= 0.0);
        CHECK(a.row(i)[j] <= 1.0);
      }
    }
  }
  SUBCASE("empty token list is rejected") {
    CHECK_THROWS_AS(FeaturizeTokens(Words{}, emb, ngrams), UsageError);
  }
}
