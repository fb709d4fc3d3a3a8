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
#include <map>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "phonoloop/phoneme_core/lexicon.hpp"
#include "phonoloop/recognizer/confusion.hpp"

namespace phonoloop {

struct ModelParams {
  double delta = 0.05;       // fixed deletion probability
  double iota = 0.01;        // fixed insertion probability
  double prior_self = 5.0;   // Dirichlet mass on the diagonal
  double prior_other = 0.1;  // Dirichlet mass on each off-diagonal cell

  bool operator==(const ModelParams&) const = default;
};

// Per-phoneme Dirichlet posterior over the confusion channel. Row p holds the
// concentration of Dir(alpha[p][.]) for what the speaker produces when they
// intend p. Counts only ever grow, except through reset_acoustic.
class AdaptiveModel {
 public:
  AdaptiveModel() = default;
  explicit AdaptiveModel(PhonemeInventory inventory, ModelParams params = {});

  const PhonemeInventory& inventory() const noexcept { return inventory_; }
  const ModelParams& params() const noexcept { return params_; }
  std::size_t size() const noexcept { return inventory_.size(); }

  double alpha(Phoneme from, Phoneme to) const { return alpha_[from.index() * size() + to.index()]; }
  std::span<const double> alpha_row(std::size_t from) const {
    return {alpha_.data() + from * size(), size()};
  }
  const std::vector<double>& alpha() const noexcept { return alpha_; }
  void add_count(Phoneme from, Phoneme to, double amount = 1.0);
  // Row-major, size() * size() positive values; throws ParseError.
  void set_alpha(std::vector<double> values);

  // Word -> weight overrides on top of lexicon weights. Survives acoustic
  // resets.
  const std::map<std::string, double>& lexical_prior() const noexcept { return lexical_prior_; }
  void set_lexical_prior(const std::string& word, double weight);
  double lexical_weight(const LexiconEntry& entry) const;

  // True when alpha equals the freshly initialized prior bit for bit.
  bool is_prior() const;
  void reset_alpha();

  bool operator==(const AdaptiveModel&) const = default;

 private:
  PhonemeInventory inventory_;
  ModelParams params_;
  std::vector<double> alpha_;
  std::map<std::string, double> lexical_prior_;
};

// Posterior mean: alpha[p][q] / sum_r alpha[p][r].
ConfusionMatrix expected_confusion(const AdaptiveModel& model);

// Each row drawn independently from Dir(alpha[row]); a pure function of
// (model, nonce).
ConfusionMatrix sample_confusion(const AdaptiveModel& model, std::uint64_t nonce);

// Aligns pron(ref_word) to the observed phonemes (unit-cost Levenshtein) and
// adds one count per Match / Substitute pair. Throws UnknownWord.
AdaptiveModel update_from_correction(AdaptiveModel model, std::string_view ref_word,
                                     const Pronunciation& observed, const Lexicon& lexicon);

// Alpha back to the prior; lexical prior untouched.
AdaptiveModel reset_acoustic(AdaptiveModel model);

// Snapshot file: {"inventory", "alpha", "delta", "iota", "prior_self",
// "prior_other", "lexical_prior"}.
nlohmann::json model_to_json(const AdaptiveModel& model);
AdaptiveModel model_from_json(const nlohmann::json& j);

}  // namespace phonoloop
