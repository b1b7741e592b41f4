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

#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "support.hpp"
#include "textrl/agent/q_network.hpp"
#include "textrl/cli/commands.hpp"
#include "textrl/cli/run_config.hpp"
#include "textrl/numeric/checkpoint.hpp"

using namespace textrl;

namespace {

struct CliResult {
  int code = 0;
  std::string out, err;
};

CliResult Run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = RunCli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string Slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Small generated corpus shared by the tests in this file.
const std::filesystem::path& DataDir() {
  static const std::filesystem::path dir = [] {
    auto d = testing::TempDir("cli-data");
    const CliResult r = Run({"generate", "--classes", "3", "--texts-per-class", "10", "--seed",
                             "4", "--out", d.string()});
    REQUIRE(r.code == 0);
    return d;
  }();
  return dir;
}

std::vector<std::string> Resources() {
  return {"--corpus",     (DataDir() / "corpus.csv").string(),
          "--embeddings", (DataDir() / "embeddings.txt").string(),
          "--ngrams",     (DataDir() / "ngrams.tsv").string()};
}

std::vector<std::string> With(std::vector<std::string> head, const std::vector<std::string>& tail) {
  head.insert(head.end(), tail.begin(), tail.end());
  return head;
}

// A zero network whose only non-zero parameter is one advantage bias, so the
// greedy policy always picks `favoured`.
std::filesystem::path FixedPolicyCheckpoint(const std::string& name, std::size_t favoured) {
  QNetwork net(QNetworkConfig{3, 1});
  for (Parameter* p : net.Parameters()) {
    if (p->name == "advantage_out.bias") p->value[favoured] = 1.0;
  }
  const auto path = testing::TempDir(name) / "checkpoint.bin";
  SaveCheckpoint(path, SnapshotParameters(std::as_const(net).Parameters()));
  return path;
}

}  // namespace

TEST_CASE("usage errors exit with 2") {
  CHECK(Run({}).code == 2);
  CHECK(Run({"frobnicate"}).code == 2);
  const CliResult missing = Run({"train", "--corpus", (DataDir() / "corpus.csv").string(),
                                 "--embeddings", (DataDir() / "embeddings.txt").string(),
                                 "--ngrams", "/nonexistent/ngrams.tsv"});
  CHECK(missing.code == 2);
  CHECK(missing.err.find("/nonexistent/ngrams.tsv") != std::string::npos);
  CHECK(Run(With({"train", "--set", "no_such_key=1"}, Resources())).code == 2);
  CHECK(Run(With({"train", "--target-mode", "triple"}, Resources())).code == 2);
}

TEST_CASE("help exits with 0") { CHECK(Run({"--help"}).code == 0); }

TEST_CASE("baseline") {
  SUBCASE("stats fixture") {
    const CliResult r = Run({"baseline", "flesch-kincaid", "--words", "100", "--sentences", "10",
                             "--syllables", "150"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("6.01") != std::string::npos);
  }
  SUBCASE("unknown formula lists the valid names") {
    const CliResult r = Run({"baseline", "smog", "--text", "Some text."});
    CHECK(r.code == 2);
    CHECK(r.err.find("flesch-kincaid") != std::string::npos);
    CHECK(r.err.find("dale-chall") != std::string::npos);
  }
  SUBCASE("--all prints four scores") {
    const CliResult r = Run({"baseline", "--all", "--format", "json", "--text",
                             "The cat sat on the mat. It was a sunny day."});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["scores"].size() == 4);
    CHECK(j["stats"]["sentences"] == 2);
  }
}

TEST_CASE("print-config round trips") {
  const CliResult first =
      Run(With({"train", "--print-config", "--episodes", "77", "--dueling-mode", "sum", "--set",
                "batch_size=8"},
               Resources()));
  REQUIRE(first.code == 0);
  CHECK(first.out.find("episodes = 77") != std::string::npos);
  const auto path = testing::TempDir("cli-config") / "run.conf";
  std::ofstream(path) << first.out;
  const CliResult second = Run({"train", "--print-config", "--config", path.string()});
  REQUIRE(second.code == 0);
  CHECK(second.out == first.out);
  // Flags override the file.
  const CliResult third =
      Run({"train", "--print-config", "--config", path.string(), "--episodes", "5"});
  CHECK(third.out.find("episodes = 5") != std::string::npos);
}

TEST_CASE("train, evaluate and assess") {
  const auto out = testing::TempDir("cli-run");
  const CliResult train = Run(With({"train", "--episodes", "6", "--seed", "2", "--out",
                                    out.string(), "--set", "batch_size=4"},
                                   Resources()));
  REQUIRE_MESSAGE(train.code == 0, train.err);
  CHECK(std::filesystem::exists(out / "checkpoint.bin"));
  CHECK(std::filesystem::exists(out / "config.txt"));
  CHECK(Slurp(out / "training_log.csv").rfind("episode,total_reward,", 0) == 0);

  SUBCASE("same invocation twice writes identical logs") {
    const auto again = testing::TempDir("cli-run-again");
    REQUIRE(Run(With({"train", "--episodes", "6", "--seed", "2", "--out", again.string(), "--set",
                      "batch_size=4"},
                     Resources()))
                .code == 0);
    CHECK(Slurp(again / "training_log.csv") == Slurp(out / "training_log.csv"));
    CHECK(Slurp(again / "checkpoint.bin") == Slurp(out / "checkpoint.bin"));
  }
  SUBCASE("json and table reports agree") {
    const CliResult json =
        Run(With({"evaluate", "--out", out.string(), "--seed", "2", "--format", "json"}, Resources()));
    const CliResult table = Run(With({"evaluate", "--out", out.string(), "--seed", "2"}, Resources()));
    REQUIRE(json.code == 0);
    REQUIRE(table.code == 0);
    const auto j = nlohmann::json::parse(json.out);
    CHECK(table.out.find(FormatDouble(j["accuracy"].get<double>())) != std::string::npos);
    CHECK(table.out.find(FormatDouble(j["rmse"].get<double>())) != std::string::npos);
    CHECK(j["count"] == 6);
    CHECK(std::filesystem::exists(out / "per_text.csv"));
  }
  SUBCASE("corrupted checkpoint magic") {
    std::string bytes = Slurp(out / "checkpoint.bin");
    bytes[0] = 'X';
    const auto bad = testing::TempDir("cli-bad") / "checkpoint.bin";
    std::ofstream(bad, std::ios::binary) << bytes;
    const CliResult r =
        Run(With({"evaluate", "--out", out.string(), "--checkpoint", bad.string()}, Resources()));
    CHECK(r.code == 2);
  }
  SUBCASE("assess is deterministic") {
    const auto args = With({"assess", "--out", out.string(), "--text", "a b c d e f g h"},
                           {"--embeddings", (DataDir() / "embeddings.txt").string(), "--ngrams",
                            (DataDir() / "ngrams.tsv").string()});
    const CliResult a = Run(args), b = Run(args);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
  }
}

TEST_CASE("assess edge cases") {
  const std::vector<std::string> resources{"--embeddings", (DataDir() / "embeddings.txt").string(),
                                           "--ngrams", (DataDir() / "ngrams.tsv").string()};
  SUBCASE("short text is classified having seen every word") {
    const auto ckpt = FixedPolicyCheckpoint("cli-class2", 1);
    const CliResult r = Run(With({"assess", "--checkpoint", ckpt.string(), "--format", "json",
                                  "--text", "three short words"},
                                 resources));
    REQUIRE_MESSAGE(r.code == 0, r.err);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["predicted"] == "2");
    CHECK(j["words_seen"] == 3);
    CHECK(j["moves"] == 0);
    CHECK(j["q_values"].size() == 4);
  }
  SUBCASE("a policy that only moves ends undecided") {
    const auto ckpt = FixedPolicyCheckpoint("cli-mover", 3);
    const CliResult r =
        Run(With({"assess", "--checkpoint", ckpt.string(), "--text", "one two three"}, resources));
    REQUIRE_MESSAGE(r.code == 0, r.err);
    CHECK(r.out.find("UNDECIDED") != std::string::npos);
    CHECK(r.out.find("moves       50") != std::string::npos);
  }
}

TEST_CASE("config parsing") {
  RunConfig config;
  std::istringstream in("# comment\nepisodes = 12\n\nlearning_rate=0.001\n");
  ParseRunConfig(in, "t.conf", config);
  CHECK(config.hyper.training_episodes == 12);
  CHECK(config.hyper.learning_rate == 0.001);
  std::istringstream bad("episodes = 12\nnot a pair\n");
  try {
    ParseRunConfig(bad, "x.conf", config);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  std::istringstream unknown("colour = red\n");
  CHECK_THROWS(ParseRunConfig(unknown, "u.conf", config));
}
