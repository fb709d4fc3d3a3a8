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

#include "phonoloop/phoneme_core/coverage.hpp"

#include <algorithm>

#include "phonoloop/error.hpp"

namespace phonoloop {

std::set<Biphone> biphones_of(const Pronunciation& pron) {
  std::set<Biphone> out;
  for (std::size_t i = 1; i < pron.size(); ++i) out.insert({pron[i - 1], pron[i]});
  return out;
}

namespace {

struct Candidate {
  const LexiconEntry* entry;
  std::vector<std::size_t> biphones;  // dense ids, deduplicated
};

std::vector<Candidate> make_candidates(const Lexicon& lexicon) {
  const std::size_t p = lexicon.inventory().size();
  std::vector<Candidate> out;
  out.reserve(lexicon.size());
  for (const auto& e : lexicon.entries()) {
    Candidate c{&e, {}};
    for (const auto& b : biphones_of(e.pron)) c.biphones.push_back(b.first.index() * p + b.second.index());
    out.push_back(std::move(c));
  }
  return out;
}

// Strict "a is a better pick than b" under the gain / length / word order.
bool better(std::size_t gain_a, const LexiconEntry& a, std::size_t gain_b, const LexiconEntry& b) {
  if (gain_a != gain_b) return gain_a > gain_b;
  if (a.pron.size() != b.pron.size()) return a.pron.size() < b.pron.size();
  return a.word < b.word;
}

std::size_t gain_of(const Candidate& c, const std::vector<bool>& covered) {
  std::size_t gain = 0;
  for (auto id : c.biphones) gain += covered[id] ? 0 : 1;
  return gain;
}

}  // namespace

CoverageReport greedy_biphone_cover(const Lexicon& lexicon, std::size_t budget, double target_coverage) {
  if (budget == 0) throw Error(ErrorCode::kBadConfig, "coverage budget must be >= 1");
  if (!(target_coverage > 0.0 && target_coverage <= 1.0)) {
    throw Error(ErrorCode::kBadConfig, "target coverage must lie in (0, 1]");
  }
  const std::size_t p = lexicon.inventory().size();
  auto candidates = make_candidates(lexicon);

  std::vector<bool> in_universe(p * p, false);
  std::size_t universe = 0;
  for (const auto& c : candidates) {
    for (auto id : c.biphones) {
      if (!in_universe[id]) {
        in_universe[id] = true;
        ++universe;
      }
    }
  }
  if (universe == 0) throw Error(ErrorCode::kEmptyUniverse, "no lexicon entry has two or more phonemes");

  CoverageReport report;
  report.universe_size = universe;
  std::vector<bool> covered(p * p, false);
  std::vector<bool> used(candidates.size(), false);
  std::size_t covered_count = 0;

  while (report.chosen.size() < budget &&
         static_cast<double>(covered_count) / static_cast<double>(universe) < target_coverage) {
    std::size_t best = candidates.size();
    std::size_t best_gain = 0;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      if (used[i]) continue;
      const auto g = gain_of(candidates[i], covered);
      if (best == candidates.size() || better(g, *candidates[i].entry, best_gain, *candidates[best].entry)) {
        best = i;
        best_gain = g;
      }
    }
    if (best == candidates.size() || best_gain == 0) break;
    used[best] = true;
    for (auto id : candidates[best].biphones) covered[id] = true;
    covered_count += best_gain;
    report.chosen.push_back(candidates[best].entry->word);
    report.steps.push_back({candidates[best].entry->word, best_gain});
  }

  for (std::size_t id = 0; id < covered.size(); ++id) {
    if (covered[id]) {
      report.covered.insert({Phoneme{static_cast<std::uint16_t>(id / p)},
                             Phoneme{static_cast<std::uint16_t>(id % p)}});
    }
  }
  report.coverage_fraction = static_cast<double>(covered_count) / static_cast<double>(universe);
  return report;
}

std::vector<std::string> greedy_coverage_order(const Lexicon& lexicon) {
  const std::size_t p = lexicon.inventory().size();
  auto candidates = make_candidates(lexicon);
  std::vector<bool> used(candidates.size(), false);
  std::vector<bool> covered(p * p, false);
  std::vector<std::string> order;

  while (true) {
    std::size_t best = candidates.size();
    std::size_t best_gain = 0;
    bool any_left = false;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      if (used[i] || candidates[i].biphones.empty()) continue;
      any_left = true;
      const auto g = gain_of(candidates[i], covered);
      if (best == candidates.size() || better(g, *candidates[i].entry, best_gain, *candidates[best].entry)) {
        best = i;
        best_gain = g;
      }
    }
    if (!any_left) break;
    if (best_gain == 0) {
      std::fill(covered.begin(), covered.end(), false);
      continue;
    }
    used[best] = true;
    for (auto id : candidates[best].biphones) covered[id] = true;
    order.push_back(candidates[best].entry->word);
  }

  std::vector<const LexiconEntry*> rest;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (!used[i]) rest.push_back(candidates[i].entry);
  }
  std::sort(rest.begin(), rest.end(), [](const LexiconEntry* a, const LexiconEntry* b) {
    return better(0, *a, 0, *b);
  });
  for (const auto* e : rest) order.push_back(e->word);
  return order;
}

}  // namespace phonoloop
