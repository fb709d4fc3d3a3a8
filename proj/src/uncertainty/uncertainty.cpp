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

#include "phonoloop/uncertainty/uncertainty.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "phonoloop/error.hpp"
#include "phonoloop/uncertainty/digamma.hpp"

namespace phonoloop {

SlotDistribution slot_distribution(const HypothesisSet& set, std::size_t slot_index) {
  if (slot_index >= set.slot_count()) throw Error(ErrorCode::kUnknownSlot, "slot " + std::to_string(slot_index));
  const auto passes = set.passes();
  SlotDistribution dist{slot_index, {}};
  for (const auto& h : passes) dist.mass[h.words[slot_index]] += 1.0;
  for (auto& [word, m] : dist.mass) m /= static_cast<double>(passes.size());
  return dist;
}

double normalized_entropy(const SlotDistribution& dist, std::size_t passes) {
  if (passes < 2) throw Error(ErrorCode::kBadConfig, "normalized entropy needs at least two passes");
  double h = 0.0;
  for (const auto& [word, m] : dist.mass) {
    if (m > 0.0) h -= m * std::log(m);
  }
  return std::clamp(h / std::log(static_cast<double>(passes)), 0.0, 1.0);
}

Band band_of(double uncertainty, const BandThresholds& thresholds) {
  if (uncertainty < thresholds.medium) return Band::kLow;
  if (uncertainty < thresholds.high) return Band::kMedium;
  return Band::kHigh;
}

std::string_view band_name(Band band) {
  switch (band) {
    case Band::kLow: return "low";
    case Band::kMedium: return "medium";
    case Band::kHigh: return "high";
  }
  return "low";
}

Band band_from_name(std::string_view name) {
  if (name == "low") return Band::kLow;
  if (name == "medium") return Band::kMedium;
  if (name == "high") return Band::kHigh;
  throw Error(ErrorCode::kParseError, "unknown band '" + std::string(name) + "'");
}

AnnotatedTranscript annotate(const HypothesisSet& set, const AdaptiveModel& model, const Lexicon& lexicon,
                             const Utterance& utterance, const BandThresholds& thresholds, std::size_t k) {
  AnnotatedTranscript out;
  out.utterance_id = utterance.id;
  std::vector<std::size_t> flagged;
  const auto& coherent = set.coherent();
  for (std::size_t slot = 0; slot < set.slot_count(); ++slot) {
    AnnotatedSlot s;
    s.word = coherent.words[slot];
    s.uncertainty = set.num_passes >= 2 ? normalized_entropy(slot_distribution(set, slot), set.num_passes) : 0.0;
    s.band = band_of(s.uncertainty, thresholds);
    if (s.band == Band::kHigh) flagged.push_back(slot);
    out.slots.push_back(std::move(s));
  }
  for (auto& alt : variation_pass(utterance, set, flagged, model, lexicon, k)) {
    out.slots[alt.slot].alternatives = std::move(alt.words);
  }
  return out;
}

double expected_row_entropy(std::span<const double> alpha_row) {
  const double total = std::accumulate(alpha_row.begin(), alpha_row.end(), 0.0);
  double weighted = 0.0;
  for (double a : alpha_row) weighted += (a / total) * digamma(a + 1.0);
  return digamma(total + 1.0) - weighted;
}

double phoneme_mutual_information(std::span<const double> alpha_row) {
  const double total = std::accumulate(alpha_row.begin(), alpha_row.end(), 0.0);
  double mean_entropy = 0.0;
  for (double a : alpha_row) {
    const double m = a / total;
    if (m > 0.0) mean_entropy -= m * std::log(m);
  }
  return std::max(0.0, mean_entropy - expected_row_entropy(alpha_row));
}

double PhonemeDifficulty::mean_score() const {
  if (rows.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& r : rows) sum += r.phd_score;
  return sum / static_cast<double>(rows.size());
}

std::vector<Phoneme> PhonemeDifficulty::ranked() const {
  std::vector<Phoneme> order;
  for (std::size_t i = 0; i < rows.size(); ++i) order.push_back(Phoneme{static_cast<std::uint16_t>(i)});
  std::stable_sort(order.begin(), order.end(),
                   [&](Phoneme a, Phoneme b) { return rows[a.index()].phd_score > rows[b.index()].phd_score; });
  return order;
}

PhonemeDifficulty phoneme_difficulty_score(const AdaptiveModel& model, double lambda) {
  if (!(lambda >= 0.0)) throw Error(ErrorCode::kBadConfig, "lambda must be non-negative");
  const auto mean = expected_confusion(model);
  PhonemeDifficulty table;
  for (std::size_t p = 0; p < model.size(); ++p) {
    PhonemeDifficultyRow row;
    row.phoneme = model.inventory().symbols()[p];
    row.error_rate = 1.0 - mean.at(p, p);
    row.epistemic_mi = phoneme_mutual_information(model.alpha_row(p));
    row.phd_score = row.error_rate + lambda * row.epistemic_mi;
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::string difficulty_csv(const PhonemeDifficulty& difficulty) {
  std::string out = "phoneme,error_rate,epistemic_mi,phd_score\n";
  for (auto p : difficulty.ranked()) {
    const auto& r = difficulty.rows[p.index()];
    out += fmt::format("{},{},{},{}\n", r.phoneme, r.error_rate, r.epistemic_mi, r.phd_score);
  }
  return out;
}

nlohmann::json transcript_to_json(const AnnotatedTranscript& transcript) {
  nlohmann::json slots = nlohmann::json::array();
  for (const auto& s : transcript.slots) {
    nlohmann::json slot = {{"word", s.word}, {"uncertainty", s.uncertainty}, {"band", band_name(s.band)}};
    if (!s.alternatives.empty()) slot["alternatives"] = s.alternatives;
    slots.push_back(std::move(slot));
  }
  return {{"utterance_id", transcript.utterance_id}, {"slots", std::move(slots)}};
}

AnnotatedTranscript transcript_from_json(const nlohmann::json& j) {
  try {
    AnnotatedTranscript t;
    t.utterance_id = j.at("utterance_id").get<std::string>();
    for (const auto& s : j.at("slots")) {
      AnnotatedSlot slot;
      slot.word = s.at("word").get<std::string>();
      slot.uncertainty = s.at("uncertainty").get<double>();
      slot.band = band_from_name(s.at("band").get<std::string>());
      if (s.contains("alternatives")) slot.alternatives = s.at("alternatives").get<std::vector<std::string>>();
      t.slots.push_back(std::move(slot));
    }
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("transcript: ") + e.what());
  }
}

nlohmann::json difficulty_to_json(const PhonemeDifficulty& difficulty) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : difficulty.rows) {
    rows.push_back({{"phoneme", r.phoneme},
                    {"error_rate", r.error_rate},
                    {"epistemic_mi", r.epistemic_mi},
                    {"phd_score", r.phd_score}});
  }
  return rows;
}

PhonemeDifficulty difficulty_from_json(const nlohmann::json& j) {
  try {
    PhonemeDifficulty d;
    for (const auto& r : j) {
      d.rows.push_back({r.at("phoneme").get<std::string>(), r.at("error_rate").get<double>(),
                        r.at("epistemic_mi").get<double>(), r.at("phd_score").get<double>()});
    }
    return d;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("difficulty: ") + e.what());
  }
}

}  // namespace phonoloop
