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

#include "textrl/numeric/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>

#include "textrl/errors.hpp"

namespace textrl {
namespace {

template <typename T>
void PutLE(std::ostream& out, T value) {
  using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
  const U bits = std::bit_cast<U>(value);
  unsigned char bytes[sizeof(U)];
  for (std::size_t i = 0; i < sizeof(U); ++i) bytes[i] = static_cast<unsigned char>(bits >> (8 * i));
  out.write(reinterpret_cast<const char*>(bytes), sizeof(U));
}

template <typename T>
bool GetLE(std::istream& in, T& value) {
  using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
  unsigned char bytes[sizeof(U)];
  if (!in.read(reinterpret_cast<char*>(bytes), sizeof(U))) return false;
  U bits = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) bits |= static_cast<U>(bytes[i]) << (8 * i);
  value = std::bit_cast<T>(bits);
  return true;
}

}  // namespace

void WriteCheckpoint(std::ostream& out, std::span<const NamedTensor> tensors) {
  out.write(kCheckpointMagic, 4);
  PutLE(out, kCheckpointVersion);
  for (const auto& [name, tensor] : tensors) {
    PutLE(out, static_cast<std::uint32_t>(name.size()));
    out.write(name.data(), static_cast<std::streamsize>(name.size()));
    PutLE(out, static_cast<std::uint32_t>(tensor.rank()));
    for (auto d : tensor.shape) PutLE(out, static_cast<std::uint64_t>(d));
    for (double v : tensor.data) PutLE(out, v);
  }
}

std::vector<NamedTensor> ReadCheckpoint(std::istream& in, const std::string& source) {
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kCheckpointMagic, 4) != 0) {
    throw ParseError(source, 0, "not a checkpoint (bad magic)");
  }
  std::uint32_t version = 0;
  if (!GetLE(in, version)) throw ParseError(source, 0, "truncated header");
  if (version != kCheckpointVersion) {
    throw ParseError(source, 0, "unsupported checkpoint version " + std::to_string(version));
  }
  std::vector<NamedTensor> tensors;
  while (in.peek() != std::char_traits<char>::eof()) {
    const std::size_t record = tensors.size() + 1;
    auto truncated = [&] {
      return ParseError(source, 0, "truncated parameter record " + std::to_string(record));
    };
    std::uint32_t name_length = 0, rank = 0;
    if (!GetLE(in, name_length) || name_length > (1u << 16)) throw truncated();
    std::string name(name_length, '\0');
    if (!in.read(name.data(), name_length)) throw truncated();
    if (!GetLE(in, rank) || rank == 0 || rank > 8) throw truncated();
    Shape shape(rank);
    for (auto& d : shape) {
      std::uint64_t dim = 0;
      if (!GetLE(in, dim) || dim == 0 || dim > (std::uint64_t{1} << 32)) throw truncated();
      d = static_cast<std::size_t>(dim);
    }
    Tensor t(shape);
    for (double& v : t.data) {
      if (!GetLE(in, v)) throw truncated();
    }
    tensors.push_back({std::move(name), std::move(t)});
  }
  return tensors;
}

void SaveCheckpoint(const std::filesystem::path& path, std::span<const NamedTensor> tensors) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  WriteCheckpoint(out, tensors);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::vector<NamedTensor> LoadCheckpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string(), 0, "cannot open checkpoint");
  return ReadCheckpoint(in, path.string());
}

std::vector<NamedTensor> SnapshotParameters(std::span<const Parameter* const> params) {
  std::vector<NamedTensor> out;
  out.reserve(params.size());
  for (const Parameter* p : params) out.push_back({p->name, p->value});
  return out;
}

void RestoreParameters(std::span<Parameter* const> params, std::span<const NamedTensor> tensors) {
  std::map<std::string, const Tensor*> by_name;
  for (const auto& t : tensors) by_name[t.name] = &t.tensor;
  if (by_name.size() != params.size()) {
    throw ShapeError("checkpoint holds " + std::to_string(by_name.size()) +
                     " parameters, network expects " + std::to_string(params.size()));
  }
  for (Parameter* p : params) {
    auto it = by_name.find(p->name);
    if (it == by_name.end()) throw ShapeError("checkpoint is missing parameter " + p->name);
    if (it->second->shape != p->shape()) {
      throw ShapeError("parameter " + p->name + ": checkpoint shape " +
                       ShapeString(it->second->shape) + " vs network " + ShapeString(p->shape()));
    }
    p->value.data = it->second->data;
  }
}

}  // namespace textrl
