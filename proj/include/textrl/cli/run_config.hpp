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

// Resolved settings for one CLI invocation. Files use `key = value` lines
// (UTF-8, '#' starts a comment); command-line flags override file values.
// WriteRunConfig emits every key, so a snapshot reproduces the run when fed
// back through --config.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "textrl/agent/trainer.hpp"
#include "textrl/env/text_environment.hpp"

namespace textrl {

enum class ReportFormat { kTable, kJson };

struct RunConfig {
  std::string corpus;
  std::string embeddings;
  std::string ngrams;
  std::string wordlist;
  std::string checkpoint;
  std::string out = "textrl-out";
  Hyperparameters hyper;
  RewardConfig rewards;
  std::uint64_t seed = 0;
  double split_fraction = 0.8;
  std::string eval_split = "test";  // "test" or "all"
  ReportFormat format = ReportFormat::kTable;
  int jobs = 0;  // 0 = all available threads
};

// Every key accepted by ApplyConfigValue, in snapshot order.
const std::vector<std::string>& ConfigKeys();

// Throws UsageError for an unknown key or a value that does not parse.
void ApplyConfigValue(RunConfig& config, std::string_view key, std::string_view value);
std::string GetConfigValue(const RunConfig& config, std::string_view key);

// Applies each `key = value` line. Throws ParseError with the line number.
void ParseRunConfig(std::istream& in, const std::string& source, RunConfig& config);
void LoadRunConfig(const std::string& path, RunConfig& config);
void WriteRunConfig(std::ostream& out, const RunConfig& config);

}  // namespace textrl
