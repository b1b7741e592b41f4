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
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "textrl/numeric/aligned.hpp"

namespace textrl {

using Shape = std::vector<std::size_t>;

std::size_t ShapeSize(const Shape& shape);
std::string ShapeString(const Shape& shape);

// Dense row-major array of doubles.
struct Tensor {
  Shape shape;
  Buffer data;

  Tensor() = default;
  explicit Tensor(Shape s, double fill = 0.0);
  Tensor(Shape s, std::span<const double> values);
  Tensor(Shape s, std::initializer_list<double> values)
      : Tensor(std::move(s), std::span<const double>(values.begin(), values.size())) {}

  std::size_t size() const { return data.size(); }
  std::size_t rank() const { return shape.size(); }
  std::size_t dim(std::size_t axis) const { return shape.at(axis); }

  double& operator[](std::size_t i) { return data[i]; }
  double operator[](std::size_t i) const { return data[i]; }

  std::span<double> values() { return data; }
  std::span<const double> values() const { return data; }

  void Fill(double v);
  bool AllFinite() const;
};

bool AllFinite(std::span<const double> values);

// Trainable tensor with its gradient and adaptive-moment state.
struct Parameter {
  std::string name;
  Tensor value;
  Tensor grad;
  Tensor first_moment;
  Tensor second_moment;
  std::int64_t step = 0;

  Parameter(std::string n, Shape shape);

  const Shape& shape() const { return value.shape; }
  std::size_t size() const { return value.size(); }
  void ZeroGrad() { grad.Fill(0.0); }
};

}  // namespace textrl
