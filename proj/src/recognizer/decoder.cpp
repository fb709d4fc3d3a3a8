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

#include "phonoloop/recognizer/decoder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "phonoloop/error.hpp"
#include "phonoloop/recognizer/channel.hpp"

namespace phonoloop {

SlotDecoder::SlotDecoder(const Lexicon& lexicon, const AdaptiveModel& model)
    : lexicon_(&lexicon), delta_(model.params().delta), iota_(model.params().iota) {
  const auto entries = lexicon.entries();
  log_prior_.reserve(entries.size());
  double total = 0.0;
  for (const auto& e : entries) total += model.lexical_weight(e);
  const double log_total = std::log(total);
  for (const auto& e : entries) {
    const double w = model.lexical_weight(e);
    log_prior_.push_back(w > 0.0 ? std::log(w) - log_total : -std::numeric_limits<double>::infinity());
  }
}

double SlotDecoder::score(std::size_t entry, const Pronunciation& observed, const ConfusionMatrix& matrix) const {
  if (log_prior_[entry] == -std::numeric_limits<double>::infinity()) return log_prior_[entry];
  return log_prior_[entry] + segment_likelihood(observed, lexicon_->entries()[entry].pron, matrix, delta_, iota_);
}

bool SlotDecoder::ranks_before(std::size_t a, double sa, std::size_t b, double sb) const {
  if (sa != sb) return sa > sb;
  return lexicon_->entries()[a].word < lexicon_->entries()[b].word;
}

std::vector<ScoredWord> SlotDecoder::rank(const Pronunciation& observed, const ConfusionMatrix& matrix) const {
  const std::size_t n = lexicon_->size();
  std::vector<double> scores(n);
  for (std::size_t i = 0; i < n; ++i) scores[i] = score(i, observed, matrix);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return ranks_before(a, scores[a], b, scores[b]); });
  std::vector<ScoredWord> out;
  out.reserve(n);
  for (auto i : order) out.push_back({lexicon_->entries()[i].word, scores[i]});
  return out;
}

std::size_t SlotDecoder::best(const Pronunciation& observed, const ConfusionMatrix& matrix) const {
  if (lexicon_->empty()) throw Error(ErrorCode::kBadConfig, "cannot decode with an empty lexicon");
  std::size_t best = 0;
  double best_score = score(0, observed, matrix);
  for (std::size_t i = 1; i < lexicon_->size(); ++i) {
    const double s = score(i, observed, matrix);
    if (ranks_before(i, s, best, best_score)) {
      best = i;
      best_score = s;
    }
  }
  return best;
}

std::vector<ScoredWord> decode_slot(const Pronunciation& observed, const Lexicon& lexicon,
                                    const ConfusionMatrix& matrix, const AdaptiveModel& model) {
  return SlotDecoder(lexicon, model).rank(observed, matrix);
}

namespace {

std::vector<std::string> decode_all(const Utterance& utterance, const SlotDecoder& decoder,
                                    const ConfusionMatrix& matrix) {
  std::vector<std::string> words;
  words.reserve(utterance.slot_count());
  for (const auto& slot : utterance.observed) {
    words.push_back(decoder.lexicon().entries()[decoder.best(slot, matrix)].word);
  }
  return words;
}

}  // namespace

std::vector<std::string> coherent_pass(const Utterance& utterance, const AdaptiveModel& model,
                                       const Lexicon& lexicon) {
  return decode_all(utterance, SlotDecoder(lexicon, model), expected_confusion(model));
}

HypothesisSet ensemble_pass(const Utterance& utterance, const AdaptiveModel& model, const Lexicon& lexicon,
                            std::size_t passes, std::uint64_t nonce) {
  if (passes < 2) throw Error(ErrorCode::kBadConfig, "an ensemble needs at least two passes");
  const SlotDecoder decoder(lexicon, model);
  HypothesisSet set;
  set.num_passes = passes;
  set.hypotheses.reserve(passes + 1);
  for (std::size_t m = 0; m < passes; ++m) {
    set.hypotheses.push_back({decode_all(utterance, decoder, sample_confusion(model, nonce + m)), {}});
  }
  set.hypotheses.push_back({decode_all(utterance, decoder, expected_confusion(model)), {}});
  set.coherent_index = passes;
  return set;
}

std::vector<SlotAlternatives> variation_pass(const Utterance& utterance, const HypothesisSet& hypotheses,
                                             std::span<const std::size_t> flagged_slots,
                                             const AdaptiveModel& model, const Lexicon& lexicon, std::size_t k) {
  if (k == 0) throw Error(ErrorCode::kBadConfig, "k must be >= 1");
  std::vector<SlotAlternatives> out;
  if (flagged_slots.empty()) return out;
  const SlotDecoder decoder(lexicon, model);
  const auto matrix = expected_confusion(model);
  for (auto slot : flagged_slots) {
    if (slot >= utterance.slot_count() || slot >= hypotheses.slot_count()) {
      throw Error(ErrorCode::kUnknownSlot, "slot " + std::to_string(slot));
    }
    const std::string& coherent = hypotheses.coherent().words[slot];
    const std::string coherent_key = fold_case(coherent);
    SlotAlternatives alt{slot, {coherent}};
    for (const auto& scored : decoder.rank(utterance.observed[slot], matrix)) {
      if (alt.words.size() >= k) break;
      if (fold_case(scored.word) != coherent_key) alt.words.push_back(scored.word);
    }
    out.push_back(std::move(alt));
  }
  return out;
}

nlohmann::json hypothesis_set_to_json(const HypothesisSet& set) {
  nlohmann::json hyps = nlohmann::json::array();
  for (const auto& h : set.hypotheses) {
    hyps.push_back({{"words", h.words}, {"slot_phonemes", h.slot_phonemes}});
  }
  return {{"slots", set.slot_count()},
          {"hypotheses", std::move(hyps)},
          {"coherent_index", set.coherent_index},
          {"num_passes", set.num_passes}};
}

HypothesisSet hypothesis_set_from_json(const nlohmann::json& j) {
  try {
    HypothesisSet set;
    for (const auto& h : j.at("hypotheses")) {
      Hypothesis hyp;
      hyp.words = h.at("words").get<std::vector<std::string>>();
      if (h.contains("slot_phonemes")) {
        hyp.slot_phonemes = h.at("slot_phonemes").get<std::vector<std::vector<std::string>>>();
      }
      set.hypotheses.push_back(std::move(hyp));
    }
    set.coherent_index = j.at("coherent_index").get<std::size_t>();
    set.num_passes = j.value("num_passes", set.hypotheses.size());
    return set;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("hypothesis set: ") + e.what());
  }
}

}  // namespace phonoloop
