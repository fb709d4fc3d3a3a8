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

#include <json.hpp>

#include "phonoloop/phoneme_core/lexicon.hpp"
#include "phonoloop/recognizer/confusion.hpp"

namespace phonoloop {

// Ground-truth channel of a synthetic speaker.
struct SpeakerProfile {
  PhonemeInventory inventory;
  ConfusionMatrix c_true;
  std::vector<double> deletion_rate;  // per intended phoneme
  std::uint64_t seed = 0;

  bool operator==(const SpeakerProfile&) const = default;
};

struct SpeakerSpec {
  std::size_t n_difficult = 0;
  double severity = 0.0;  // in [0, 1)
  std::uint64_t seed = 0;

  bool operator==(const SpeakerSpec&) const = default;
};

// Seeded severe-speaker generator: `n_difficult` phonemes lose `severity` of
// their diagonal mass to one or two confusion targets and get deletion rate
// severity / 5; every other row keeps 0.98 on the diagonal (rest spread
// evenly) and deletion rate 0.01. Throws BadSpec.
SpeakerProfile make_speaker(const PhonemeInventory& inventory, const SpeakerSpec& spec);

enum class UtteranceSource { kSimulated, kUploaded, kExternal };

struct Utterance {
  std::string id;
  std::vector<std::string> prompt_words;    // empty for free speech
  std::vector<Pronunciation> observed;      // one entry per word slot
  UtteranceSource source = UtteranceSource::kSimulated;

  std::size_t slot_count() const noexcept { return observed.size(); }
  bool operator==(const Utterance&) const = default;
};

// Each intended phoneme is dropped with its deletion rate, otherwise replaced
// by a draw from its c_true row. Pure in (profile.seed, nonce). Throws
// UnknownWord.
Utterance simulate_utterance(const SpeakerProfile& profile, std::span<const std::string> prompt,
                             const Lexicon& lexicon, std::uint64_t nonce);

nlohmann::json speaker_to_json(const SpeakerProfile& speaker);
SpeakerProfile speaker_from_json(const nlohmann::json& j);
nlohmann::json speaker_spec_to_json(const SpeakerSpec& spec);
SpeakerSpec speaker_spec_from_json(const nlohmann::json& j);

std::string_view source_name(UtteranceSource source);
UtteranceSource source_from_name(std::string_view name);

}  // namespace phonoloop
