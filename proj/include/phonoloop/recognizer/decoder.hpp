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

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "phonoloop/phoneme_core/lexicon.hpp"
#include "phonoloop/recognizer/model.hpp"
#include "phonoloop/recognizer/speaker.hpp"

namespace phonoloop {

inline constexpr std::size_t kDefaultPasses = 10;
inline constexpr std::size_t kDefaultTopK = 5;

struct ScoredWord {
  std::string word;
  double score = 0.0;  // log posterior up to the observation normalizer
};

// Precomputes log lexical priors so one lexicon can be scored against many
// observations and matrices.
class SlotDecoder {
 public:
  SlotDecoder(const Lexicon& lexicon, const AdaptiveModel& model);

  // Full descending ranking; equal scores fall back to word order.
  std::vector<ScoredWord> rank(const Pronunciation& observed, const ConfusionMatrix& matrix) const;
  // Index into lexicon().entries() of the top-ranked word.
  std::size_t best(const Pronunciation& observed, const ConfusionMatrix& matrix) const;

  const Lexicon& lexicon() const noexcept { return *lexicon_; }

 private:
  double score(std::size_t entry, const Pronunciation& observed, const ConfusionMatrix& matrix) const;
  bool ranks_before(std::size_t a, double sa, std::size_t b, double sb) const;

  const Lexicon* lexicon_;
  double delta_;
  double iota_;
  std::vector<double> log_prior_;
};

// score(w) = log prior(w) - log sum prior + segment_likelihood(observed, pron(w)).
std::vector<ScoredWord> decode_slot(const Pronunciation& observed, const Lexicon& lexicon,
                                    const ConfusionMatrix& matrix, const AdaptiveModel& model);

struct Hypothesis {
  std::vector<std::string> words;  // one per slot
  // Per-slot phoneme strings; only external recognizers fill this.
  std::vector<std::vector<std::string>> slot_phonemes;

  bool operator==(const Hypothesis&) const = default;
};

// The first `num_passes` hypotheses are posterior-sample passes. The coherent
// hypothesis is either one of them or appended after them.
struct HypothesisSet {
  std::vector<Hypothesis> hypotheses;
  std::size_t coherent_index = 0;
  std::size_t num_passes = 0;

  const Hypothesis& coherent() const { return hypotheses.at(coherent_index); }
  std::span<const Hypothesis> passes() const { return {hypotheses.data(), num_passes}; }
  std::size_t slot_count() const { return hypotheses.empty() ? 0 : hypotheses.front().words.size(); }

  bool operator==(const HypothesisSet&) const = default;
};

// Per-slot argmax under the posterior mean.
std::vector<std::string> coherent_pass(const Utterance& utterance, const AdaptiveModel& model,
                                       const Lexicon& lexicon);

// `passes` posterior-sample decodes (sample m uses nonce + m) followed by the
// coherent pass at index `passes`. Throws BadConfig when passes < 2.
HypothesisSet ensemble_pass(const Utterance& utterance, const AdaptiveModel& model, const Lexicon& lexicon,
                            std::size_t passes, std::uint64_t nonce);

struct SlotAlternatives {
  std::size_t slot = 0;
  std::vector<std::string> words;  // coherent word first

  bool operator==(const SlotAlternatives&) const = default;
};

// Top-k re-ranking of the flagged slots only, under the posterior mean, with
// the coherent-pass word leading each list. Throws UnknownSlot.
std::vector<SlotAlternatives> variation_pass(const Utterance& utterance, const HypothesisSet& hypotheses,
                                             std::span<const std::size_t> flagged_slots,
                                             const AdaptiveModel& model, const Lexicon& lexicon,
                                             std::size_t k = kDefaultTopK);

nlohmann::json hypothesis_set_to_json(const HypothesisSet& set);
HypothesisSet hypothesis_set_from_json(const nlohmann::json& j);

}  // namespace phonoloop
