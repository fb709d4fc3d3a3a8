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

#include <compare>
#include <cstddef>
#include <set>
#include <string>
#include <vector>

#include "phonoloop/phoneme_core/lexicon.hpp"

namespace phonoloop {

struct Biphone {
  Phoneme first;
  Phoneme second;

  friend constexpr auto operator<=>(const Biphone&, const Biphone&) = default;
};

// Consecutive within-word pairs; empty for single-phoneme pronunciations.
std::set<Biphone> biphones_of(const Pronunciation& pron);

struct CoverageStep {
  std::string word;
  std::size_t newly_covered = 0;

  bool operator==(const CoverageStep&) const = default;
};

struct CoverageReport {
  std::vector<std::string> chosen;
  std::set<Biphone> covered;
  std::size_t universe_size = 0;
  double coverage_fraction = 0.0;
  std::vector<CoverageStep> steps;

  bool operator==(const CoverageReport&) const = default;
};

inline constexpr std::size_t kDefaultCoverageBudget = 500;

// Greedy set cover over the biphone universe realized by `lexicon`. Each step
// takes the word adding the most uncovered biphones; ties prefer the shorter
// pronunciation, then the lexicographically smaller word. Stops at
// `target_coverage` or after `budget` words. Throws EmptyUniverse when no
// entry has two or more phonemes.
CoverageReport greedy_biphone_cover(const Lexicon& lexicon,
                                    std::size_t budget = kDefaultCoverageBudget,
                                    double target_coverage = 1.0);

// Full greedy ordering of every entry: repeated cover passes, each restarting
// from an empty covered set once the previous pass saturates. Words that add
// nothing in any pass (single phonemes) come last, shortest first.
std::vector<std::string> greedy_coverage_order(const Lexicon& lexicon);

}  // namespace phonoloop
