// Copyright 2026 The Phonoloop Authors
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
#include <span>
#include <vector>

#include "phonoloop/phoneme_core/inventory.hpp"

namespace phonoloop {

// Square row-stochastic matrix; entry (p, q) is P(observe q | intended p).
class ConfusionMatrix {
 public:
  static constexpr double kRowTolerance = 1e-9;

  ConfusionMatrix() = default;
  // Row-major values; throws BadSpec unless every row sums to 1 within
  // kRowTolerance with non-negative entries.
  ConfusionMatrix(std::size_t size, std::vector<double> values);

  static ConfusionMatrix identity(std::size_t size);

  std::size_t size() const noexcept { return size_; }
  double operator()(Phoneme from, Phoneme to) const { return values_[from.index() * size_ + to.index()]; }
  double at(std::size_t from, std::size_t to) const { return values_[from * size_ + to]; }
  std::span<const double> row(std::size_t from) const {
    return {values_.data() + from * size_, size_};
  }
  const std::vector<double>& values() const noexcept { return values_; }

  bool operator==(const ConfusionMatrix&) const = default;

 private:
  std::size_t size_ = 0;
  std::vector<double> values_;
};

}  // namespace phonoloop
