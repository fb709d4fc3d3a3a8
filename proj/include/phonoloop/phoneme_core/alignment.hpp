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

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace phonoloop {

enum class EditKind { kMatch, kSubstitute, kDelete, kInsert };

// Positions index into the aligned sequences; `hyp_pos` is unused for
// deletions and `ref_pos` for insertions.
struct EditOp {
  EditKind kind;
  std::size_t ref_pos = 0;
  std::size_t hyp_pos = 0;

  bool operator==(const EditOp&) const = default;
};

struct Alignment {
  std::vector<EditOp> ops;
  std::size_t substitutions = 0;
  std::size_t deletions = 0;
  std::size_t insertions = 0;
  std::size_t ref_length = 0;

  std::size_t distance() const noexcept { return substitutions + deletions + insertions; }
};

// Unit-cost Levenshtein alignment. Among minimal scripts the backtrace
// prefers Match, then Substitute, then Delete, then Insert at each cell.
template <class T>
Alignment align_sequences(std::span<const T> ref, std::span<const T> hyp) {
  const std::size_t n = ref.size();
  const std::size_t m = hyp.size();
  const std::size_t width = m + 1;
  std::vector<std::size_t> cost((n + 1) * width);
  auto at = [&](std::size_t i, std::size_t j) -> std::size_t& { return cost[i * width + j]; };

  for (std::size_t i = 0; i <= n; ++i) at(i, 0) = i;
  for (std::size_t j = 0; j <= m; ++j) at(0, j) = j;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      const std::size_t diag = at(i - 1, j - 1) + (ref[i - 1] == hyp[j - 1] ? 0 : 1);
      at(i, j) = std::min({diag, at(i - 1, j) + 1, at(i, j - 1) + 1});
    }
  }

  Alignment result;
  result.ref_length = n;
  std::size_t i = n;
  std::size_t j = m;
  while (i > 0 || j > 0) {
    const std::size_t here = at(i, j);
    if (i > 0 && j > 0 && ref[i - 1] == hyp[j - 1] && here == at(i - 1, j - 1)) {
      result.ops.push_back({EditKind::kMatch, i - 1, j - 1});
      --i;
      --j;
    } else if (i > 0 && j > 0 && !(ref[i - 1] == hyp[j - 1]) && here == at(i - 1, j - 1) + 1) {
      result.ops.push_back({EditKind::kSubstitute, i - 1, j - 1});
      ++result.substitutions;
      --i;
      --j;
    } else if (i > 0 && here == at(i - 1, j) + 1) {
      result.ops.push_back({EditKind::kDelete, i - 1, 0});
      ++result.deletions;
      --i;
    } else {
      result.ops.push_back({EditKind::kInsert, 0, j - 1});
      ++result.insertions;
      --j;
    }
  }
  std::reverse(result.ops.begin(), result.ops.end());
  return result;
}

template <class T>
Alignment align_sequences(const std::vector<T>& ref, const std::vector<T>& hyp) {
  return align_sequences(std::span<const T>(ref), std::span<const T>(hyp));
}

struct WerResult {
  double wer = 0.0;
  std::size_t substitutions = 0;
  std::size_t deletions = 0;
  std::size_t insertions = 0;
  std::size_t ref_length = 0;
};

// (S + D + I) / N; may exceed 1. Throws EmptyReference.
WerResult word_error_rate(std::span<const std::string> ref, std::span<const std::string> hyp);

// Whitespace tokenization helper for word strings.
std::vector<std::string> split_words(std::string_view text);

}  // namespace phonoloop
