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
#include <map>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "phonoloop/recognizer/decoder.hpp"

namespace phonoloop {

// Empirical word distribution of one slot across the posterior-sample passes.
struct SlotDistribution {
  std::size_t slot_index = 0;
  std::map<std::string, double> mass;
};

SlotDistribution slot_distribution(const HypothesisSet& set, std::size_t slot_index);

// Entropy in nats divided by ln(passes), clamped to [0, 1].
double normalized_entropy(const SlotDistribution& dist, std::size_t passes);

enum class Band { kLow, kMedium, kHigh };

// Low < medium <= Medium < high <= High.
struct BandThresholds {
  double medium = 0.15;
  double high = 0.30;

  bool operator==(const BandThresholds&) const = default;
};

Band band_of(double uncertainty, const BandThresholds& thresholds);
std::string_view band_name(Band band);
Band band_from_name(std::string_view name);

struct AnnotatedSlot {
  std::string word;
  double uncertainty = 0.0;
  Band band = Band::kLow;
  std::vector<std::string> alternatives;  // only for High slots

  bool operator==(const AnnotatedSlot&) const = default;
};

struct AnnotatedTranscript {
  std::string utterance_id;
  std::vector<AnnotatedSlot> slots;

  bool operator==(const AnnotatedTranscript&) const = default;
};

// Coherent-pass words with ensemble-entropy uncertainty; High slots get the
// variation-pass top-k list.
AnnotatedTranscript annotate(const HypothesisSet& set, const AdaptiveModel& model, const Lexicon& lexicon,
                             const Utterance& utterance, const BandThresholds& thresholds = {},
                             std::size_t k = kDefaultTopK);

// E[H(pi)] for pi ~ Dir(alpha): psi(A + 1) - sum_q (alpha_q / A) psi(alpha_q + 1).
double expected_row_entropy(std::span<const double> alpha_row);

// H(E[pi]) - E[H(pi)], clamped at zero.
double phoneme_mutual_information(std::span<const double> alpha_row);

struct PhonemeDifficultyRow {
  std::string phoneme;
  double error_rate = 0.0;
  double epistemic_mi = 0.0;
  double phd_score = 0.0;

  bool operator==(const PhonemeDifficultyRow&) const = default;
};

// Rows in inventory order.
struct PhonemeDifficulty {
  std::vector<PhonemeDifficultyRow> rows;

  double score(Phoneme p) const { return rows.at(p.index()).phd_score; }
  double mean_score() const;
  // Phoneme ids by descending phd, ties in inventory order.
  std::vector<Phoneme> ranked() const;

  bool operator==(const PhonemeDifficulty&) const = default;
};

inline constexpr double kDefaultDifficultyLambda = 1.0;

// phd = (1 - E[diag]) + lambda * MI(alpha row).
PhonemeDifficulty phoneme_difficulty_score(const AdaptiveModel& model, double lambda = kDefaultDifficultyLambda);

// `phoneme,error_rate,epistemic_mi,phd_score`, sorted by phd descending.
std::string difficulty_csv(const PhonemeDifficulty& difficulty);

nlohmann::json transcript_to_json(const AnnotatedTranscript& transcript);
AnnotatedTranscript transcript_from_json(const nlohmann::json& j);
nlohmann::json difficulty_to_json(const PhonemeDifficulty& difficulty);
PhonemeDifficulty difficulty_from_json(const nlohmann::json& j);

}  // namespace phonoloop
