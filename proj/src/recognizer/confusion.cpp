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

#include "phonoloop/recognizer/confusion.hpp"

#include <cmath>
#include <string>

#include "phonoloop/error.hpp"

namespace phonoloop {

ConfusionMatrix::ConfusionMatrix(std::size_t size, std::vector<double> values)
    : size_(size), values_(std::move(values)) {
  if (values_.size() != size_ * size_) {
    throw Error(ErrorCode::kBadSpec, "confusion matrix needs size*size values");
  }
  for (std::size_t p = 0; p < size_; ++p) {
    double sum = 0.0;
    for (double v : row(p)) {
      if (!(v >= 0.0) || !std::isfinite(v)) {
        throw Error(ErrorCode::kBadSpec, "negative or non-finite entry in row " + std::to_string(p));
      }
      sum += v;
    }
    if (std::abs(sum - 1.0) > kRowTolerance) {
      throw Error(ErrorCode::kBadSpec, "row " + std::to_string(p) + " sums to " + std::to_string(sum));
    }
  }
}

ConfusionMatrix ConfusionMatrix::identity(std::size_t size) {
  std::vector<double> values(size * size, 0.0);
  for (std::size_t p = 0; p < size; ++p) values[p * size + p] = 1.0;
  return ConfusionMatrix(size, std::move(values));
}

}  // namespace phonoloop
