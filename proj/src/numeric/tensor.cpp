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

#include "textrl/numeric/tensor.hpp"

#include <cmath>
#include <functional>
#include <numeric>

#include "textrl/errors.hpp"

namespace textrl {

std::size_t ShapeSize(const Shape& shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1},
                         std::multiplies<>());
}

std::string ShapeString(const Shape& shape) {
  std::string out = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) out += "x";
    out += std::to_string(shape[i]);
  }
  return out + "]";
}

Tensor::Tensor(Shape s, double fill) : shape(std::move(s)), data(ShapeSize(shape), fill) {
  for (auto d : shape) {
    if (d == 0) throw ShapeError("tensor dimensions must be positive, got " + ShapeString(shape));
  }
}

Tensor::Tensor(Shape s, std::span<const double> values)
    : shape(std::move(s)), data(values.begin(), values.end()) {
  if (ShapeSize(shape) != data.size()) {
    throw ShapeError("tensor shape " + ShapeString(shape) + " needs " +
                     std::to_string(ShapeSize(shape)) + " values, got " +
                     std::to_string(data.size()));
  }
}

void Tensor::Fill(double v) { std::fill(data.begin(), data.end(), v); }

bool Tensor::AllFinite() const { return textrl::AllFinite(data); }

bool AllFinite(std::span<const double> values) {
  for (double v : values) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

Parameter::Parameter(std::string n, Shape shape)
    : name(std::move(n)),
      value(shape),
      grad(shape),
      first_moment(shape),
      second_moment(shape) {}

}  // namespace textrl
