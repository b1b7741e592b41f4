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

#include "textrl/cli/run_config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <limits>
#include <ostream>

#include "textrl/errors.hpp"
#include "textrl/text/embeddings.hpp"

namespace textrl {
namespace {

std::string_view Trim(std::string_view s) {
  const auto ws = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (!s.empty() && ws(s.front())) s.remove_prefix(1);
  while (!s.empty() && ws(s.back())) s.remove_suffix(1);
  return s;
}

[[noreturn]] void BadValue(std::string_view key, std::string_view value, std::string_view want) {
  throw UsageError("invalid value '" + std::string(value) + "' for " + std::string(key) +
                   " (expected " + std::string(want) + ")");
}

double ToDouble(std::string_view key, std::string_view v) {
  double out = 0.0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) BadValue(key, v, "a number");
  return out;
}

template <typename Int>
Int ToInt(std::string_view key, std::string_view v) {
  Int out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) BadValue(key, v, "a non-negative integer");
  return out;
}

bool ToBool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  BadValue(key, v, "true or false");
}

struct Field {
  std::string key;
  std::function<void(RunConfig&, std::string_view)> set;
  std::function<std::string(const RunConfig&)> get;
};

#define TEXTRL_STRING_FIELD(name, member)                                          \
  Field {                                                                          \
    name, [](RunConfig& c, std::string_view v) { c.member = std::string(v); },     \
        [](const RunConfig& c) { return c.member; }                                \
  }
#define TEXTRL_DOUBLE_FIELD(name, member)                                          \
  Field {                                                                          \
    name, [](RunConfig& c, std::string_view v) { c.member = ToDouble(name, v); },  \
        [](const RunConfig& c) { return FormatDouble(c.member); }                  \
  }
#define TEXTRL_SIZE_FIELD(name, member)                                                      \
  Field {                                                                                    \
    name, [](RunConfig& c, std::string_view v) { c.member = ToInt<std::size_t>(name, v); }, \
        [](const RunConfig& c) { return std::to_string(c.member); }                          \
  }

const std::vector<Field>& Fields() {
  static const std::vector<Field> fields = {
      TEXTRL_STRING_FIELD("corpus", corpus),
      TEXTRL_STRING_FIELD("embeddings", embeddings),
      TEXTRL_STRING_FIELD("ngrams", ngrams),
      TEXTRL_STRING_FIELD("wordlist", wordlist),
      TEXTRL_STRING_FIELD("checkpoint", checkpoint),
      TEXTRL_STRING_FIELD("out", out),
      Field{"seed", [](RunConfig& c, std::string_view v) { c.seed = ToInt<std::uint64_t>("seed", v); },
            [](const RunConfig& c) { return std::to_string(c.seed); }},
      TEXTRL_SIZE_FIELD("episodes", hyper.training_episodes),
      TEXTRL_SIZE_FIELD("testing_episodes", hyper.testing_episodes),
      TEXTRL_DOUBLE_FIELD("learning_rate", hyper.learning_rate),
      TEXTRL_DOUBLE_FIELD("discount", hyper.discount),
      TEXTRL_SIZE_FIELD("target_sync_episodes", hyper.target_sync_episodes),
      TEXTRL_SIZE_FIELD("batch_size", hyper.batch_size),
      TEXTRL_SIZE_FIELD("buffer_capacity", hyper.buffer_capacity),
      TEXTRL_DOUBLE_FIELD("epsilon_initial", hyper.epsilon_initial),
      TEXTRL_DOUBLE_FIELD("epsilon_final", hyper.epsilon_final),
      TEXTRL_DOUBLE_FIELD("anneal_fraction", hyper.anneal_fraction),
      Field{"target_mode",
            [](RunConfig& c, std::string_view v) {
              if (v == "double") {
                c.hyper.target_mode = TargetMode::kDouble;
              } else if (v == "vanilla") {
                c.hyper.target_mode = TargetMode::kVanilla;
              } else {
                BadValue("target_mode", v, "double or vanilla");
              }
            },
            [](const RunConfig& c) {
              return std::string(c.hyper.target_mode == TargetMode::kDouble ? "double" : "vanilla");
            }},
      Field{"dueling_mode",
            [](RunConfig& c, std::string_view v) {
              if (v == "mean") {
                c.hyper.dueling = DuelingMode::kMeanCentered;
              } else if (v == "sum") {
                c.hyper.dueling = DuelingMode::kNaiveSum;
              } else {
                BadValue("dueling_mode", v, "mean or sum");
              }
            },
            [](const RunConfig& c) {
              return std::string(c.hyper.dueling == DuelingMode::kMeanCentered ? "mean" : "sum");
            }},
      Field{"allow_backward",
            [](RunConfig& c, std::string_view v) { c.hyper.allow_backward = ToBool("allow_backward", v); },
            [](const RunConfig& c) { return std::string(c.hyper.allow_backward ? "true" : "false"); }},
      TEXTRL_DOUBLE_FIELD("move_penalty", rewards.move_penalty),
      TEXTRL_DOUBLE_FIELD("correct_reward", rewards.correct_reward),
      TEXTRL_DOUBLE_FIELD("incorrect_penalty", rewards.incorrect_penalty),
      TEXTRL_SIZE_FIELD("max_moves", rewards.max_moves),
      TEXTRL_DOUBLE_FIELD("split_fraction", split_fraction),
      Field{"eval_split",
            [](RunConfig& c, std::string_view v) {
              if (v != "test" && v != "all") BadValue("eval_split", v, "test or all");
              c.eval_split = std::string(v);
            },
            [](const RunConfig& c) { return c.eval_split; }},
      Field{"format",
            [](RunConfig& c, std::string_view v) {
              if (v == "table") {
                c.format = ReportFormat::kTable;
              } else if (v == "json") {
                c.format = ReportFormat::kJson;
              } else {
                BadValue("format", v, "table or json");
              }
            },
            [](const RunConfig& c) {
              return std::string(c.format == ReportFormat::kTable ? "table" : "json");
            }},
      Field{"jobs",
            [](RunConfig& c, std::string_view v) {
              const auto n = ToInt<unsigned>("jobs", v);
              if (n > static_cast<unsigned>(std::numeric_limits<int>::max())) BadValue("jobs", v, "a thread count");
              c.jobs = static_cast<int>(n);
            },
            [](const RunConfig& c) { return std::to_string(c.jobs); }},
  };
  return fields;
}

#undef TEXTRL_STRING_FIELD
#undef TEXTRL_DOUBLE_FIELD
#undef TEXTRL_SIZE_FIELD

const Field& Find(std::string_view key) {
  for (const auto& f : Fields()) {
    if (f.key == key) return f;
  }
  throw UsageError("unknown configuration key '" + std::string(key) + "'");
}

}  // namespace

const std::vector<std::string>& ConfigKeys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& f : Fields()) k.push_back(f.key);
    return k;
  }();
  return keys;
}

void ApplyConfigValue(RunConfig& config, std::string_view key, std::string_view value) {
  Find(key).set(config, Trim(value));
}

std::string GetConfigValue(const RunConfig& config, std::string_view key) {
  return Find(key).get(config);
}

void ParseRunConfig(std::istream& in, const std::string& source, RunConfig& config) {
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    std::string_view s = line;
    if (const auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
    s = Trim(s);
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string_view::npos) throw ParseError(source, line_no, "expected 'key = value'");
    try {
      ApplyConfigValue(config, Trim(s.substr(0, eq)), Trim(s.substr(eq + 1)));
    } catch (const UsageError& e) {
      throw ParseError(source, line_no, e.what());
    }
  }
}

void LoadRunConfig(const std::string& path, RunConfig& config) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "cannot open config file");
  ParseRunConfig(in, path, config);
}

void WriteRunConfig(std::ostream& out, const RunConfig& config) {
  for (const auto& f : Fields()) out << f.key << " = " << f.get(config) << '\n';
}

}  // namespace textrl
