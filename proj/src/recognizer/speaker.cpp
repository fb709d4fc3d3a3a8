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

#include "phonoloop/recognizer/speaker.hpp"

#include <algorithm>
#include <numeric>

#include <boost/random/uniform_01.hpp>
#include <boost/random/uniform_int_distribution.hpp>
#include <boost/random/uniform_real_distribution.hpp>

#include "phonoloop/error.hpp"
#include "phonoloop/random.hpp"

namespace phonoloop {

namespace {

constexpr std::uint64_t kSpeakerTag = 0x5a3d1e0f00000002ULL;
constexpr std::uint64_t kRenderTag = 0x5a3d1e0f00000003ULL;
constexpr double kCleanDiagonal = 0.98;
constexpr double kCleanDeletion = 0.01;

std::size_t draw_index(Rng& rng, std::size_t n) {
  boost::random::uniform_int_distribution<std::size_t> pick(0, n - 1);
  return pick(rng);
}

// Inverse-CDF draw; lands on the last positive entry if rounding leaves u
// beyond the cumulative sum.
std::size_t draw_from_row(Rng& rng, std::span<const double> row) {
  const double u = boost::random::uniform_01<double>()(rng);
  double cumulative = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t q = 0; q < row.size(); ++q) {
    if (row[q] <= 0.0) continue;
    cumulative += row[q];
    last_positive = q;
    if (u < cumulative) return q;
  }
  return last_positive;
}

}  // namespace

SpeakerProfile make_speaker(const PhonemeInventory& inventory, const SpeakerSpec& spec) {
  const std::size_t p = inventory.size();
  if (p == 0) throw Error(ErrorCode::kBadSpec, "empty inventory");
  if (spec.n_difficult > p) throw Error(ErrorCode::kBadSpec, "n_difficult exceeds inventory size");
  if (!(spec.severity >= 0.0 && spec.severity < 1.0)) throw Error(ErrorCode::kBadSpec, "severity outside [0, 1)");
  if (spec.n_difficult > 0 && spec.severity > 0.0 && p < 2) {
    throw Error(ErrorCode::kBadSpec, "confusions need at least two phonemes");
  }

  Rng rng = make_rng(spec.seed, kSpeakerTag);
  std::vector<std::size_t> order(p);
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t i = p; i > 1; --i) std::swap(order[i - 1], order[draw_index(rng, i)]);

  std::vector<bool> difficult(p, false);
  for (std::size_t i = 0; i < spec.n_difficult; ++i) difficult[order[i]] = true;

  std::vector<double> values(p * p, 0.0);
  std::vector<double> deletion(p, kCleanDeletion);
  for (std::size_t r = 0; r < p; ++r) {
    double* row = values.data() + r * p;
    if (!difficult[r]) {
      if (p == 1) {
        row[0] = 1.0;
        continue;
      }
      const double spread = (1.0 - kCleanDiagonal) / static_cast<double>(p - 1);
      for (std::size_t q = 0; q < p; ++q) row[q] = q == r ? kCleanDiagonal : spread;
      continue;
    }
    deletion[r] = spec.severity / 5.0;
    row[r] = 1.0 - spec.severity;
    if (spec.severity == 0.0) continue;
    const std::size_t targets = std::min<std::size_t>(1 + draw_index(rng, 2), p - 1);
    std::vector<std::size_t> others;
    for (std::size_t q = 0; q < p; ++q) {
      if (q != r) others.push_back(q);
    }
    const std::size_t first = others[draw_index(rng, others.size())];
    if (targets == 1) {
      row[first] += spec.severity;
      continue;
    }
    std::erase(others, first);
    const std::size_t second = others[draw_index(rng, others.size())];
    const double share = boost::random::uniform_real_distribution<double>(0.5, 0.8)(rng);
    row[first] += spec.severity * share;
    row[second] += spec.severity - spec.severity * share;
  }
  return SpeakerProfile{inventory, ConfusionMatrix(p, std::move(values)), std::move(deletion), spec.seed};
}

Utterance simulate_utterance(const SpeakerProfile& profile, std::span<const std::string> prompt,
                             const Lexicon& lexicon, std::uint64_t nonce) {
  Utterance utt;
  utt.prompt_words.assign(prompt.begin(), prompt.end());
  utt.source = UtteranceSource::kSimulated;
  Rng rng(derive_seed(profile.seed, kRenderTag, nonce));
  boost::random::uniform_01<double> unit;
  for (const auto& word : prompt) {
    const auto& pron = phonemes_of(word, lexicon);
    Pronunciation slot;
    for (auto ph : pron) {
      if (unit(rng) < profile.deletion_rate.at(ph.index())) continue;
      slot.push_back(Phoneme{static_cast<std::uint16_t>(draw_from_row(rng, profile.c_true.row(ph.index())))});
    }
    utt.observed.push_back(std::move(slot));
  }
  return utt;
}

nlohmann::json speaker_to_json(const SpeakerProfile& speaker) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t r = 0; r < speaker.c_true.size(); ++r) {
    const auto row = speaker.c_true.row(r);
    rows.push_back(std::vector<double>(row.begin(), row.end()));
  }
  return {{"inventory", speaker.inventory.symbols()},
          {"c_true", std::move(rows)},
          {"deletion_rate", speaker.deletion_rate},
          {"seed", speaker.seed}};
}

SpeakerProfile speaker_from_json(const nlohmann::json& j) {
  try {
    SpeakerProfile s;
    s.inventory = PhonemeInventory(j.at("inventory").get<std::vector<std::string>>());
    const std::size_t p = s.inventory.size();
    std::vector<double> values;
    const auto& rows = j.at("c_true");
    if (rows.size() != p) throw Error(ErrorCode::kBadSpec, "c_true row count mismatch");
    for (const auto& row : rows) {
      auto r = row.get<std::vector<double>>();
      if (r.size() != p) throw Error(ErrorCode::kBadSpec, "c_true column count mismatch");
      values.insert(values.end(), r.begin(), r.end());
    }
    s.c_true = ConfusionMatrix(p, std::move(values));
    s.deletion_rate = j.at("deletion_rate").get<std::vector<double>>();
    if (s.deletion_rate.size() != p) throw Error(ErrorCode::kBadSpec, "deletion_rate size mismatch");
    for (double d : s.deletion_rate) {
      if (!(d >= 0.0 && d <= 1.0)) throw Error(ErrorCode::kBadSpec, "deletion rate outside [0, 1]");
    }
    s.seed = j.at("seed").get<std::uint64_t>();
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kBadSpec, std::string("speaker: ") + e.what());
  }
}

nlohmann::json speaker_spec_to_json(const SpeakerSpec& spec) {
  return {{"n_difficult", spec.n_difficult}, {"severity", spec.severity}, {"seed", spec.seed}};
}

SpeakerSpec speaker_spec_from_json(const nlohmann::json& j) {
  try {
    return SpeakerSpec{j.at("n_difficult").get<std::size_t>(), j.at("severity").get<double>(),
                       j.at("seed").get<std::uint64_t>()};
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kBadSpec, std::string("speaker spec: ") + e.what());
  }
}

std::string_view source_name(UtteranceSource source) {
  switch (source) {
    case UtteranceSource::kSimulated: return "simulated";
    case UtteranceSource::kUploaded: return "uploaded";
    case UtteranceSource::kExternal: return "external";
  }
  return "simulated";
}

UtteranceSource source_from_name(std::string_view name) {
  if (name == "simulated") return UtteranceSource::kSimulated;
  if (name == "uploaded") return UtteranceSource::kUploaded;
  if (name == "external") return UtteranceSource::kExternal;
  throw Error(ErrorCode::kParseError, "unknown utterance source '" + std::string(name) + "'");
}

}  // namespace phonoloop
