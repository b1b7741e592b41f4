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

// Binary parameter checkpoint.
//
//   "DRLR"            4 bytes magic
//   version           u32
//   repeated until EOF, one record per parameter:
//     name_length     u32
//     name            name_length bytes (UTF-8, no terminator)
//     rank            u32
//     dims            rank x u64
//     values          product(dims) x f64
//
// All integers and floats are little-endian.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "textrl/numeric/tensor.hpp"

namespace textrl {

inline constexpr char kCheckpointMagic[4] = {'D', 'R', 'L', 'R'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

struct NamedTensor {
  std::string name;
  Tensor tensor;
};

void WriteCheckpoint(std::ostream& out, std::span<const NamedTensor> tensors);
// Throws ParseError on bad magic, unsupported version, or truncation.
std::vector<NamedTensor> ReadCheckpoint(std::istream& in, const std::string& source = "<stream>");

void SaveCheckpoint(const std::filesystem::path& path, std::span<const NamedTensor> tensors);
std::vector<NamedTensor> LoadCheckpoint(const std::filesystem::path& path);

std::vector<NamedTensor> SnapshotParameters(std::span<const Parameter* const> params);
// Copies values into matching parameters by name; throws ShapeError on any
// missing name, extra name, or shape mismatch.
void RestoreParameters(std::span<Parameter* const> params, std::span<const NamedTensor> tensors);

}  // namespace textrl
