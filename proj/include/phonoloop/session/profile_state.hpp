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
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "phonoloop/audio/snr_gate.hpp"
#include "phonoloop/curriculum/curriculum.hpp"
#include "phonoloop/phoneme_core/lexicon.hpp"
#include "phonoloop/recognizer/decoder.hpp"
#include "phonoloop/recognizer/model.hpp"
#include "phonoloop/recognizer/speaker.hpp"
#include "phonoloop/session/events.hpp"
#include "phonoloop/uncertainty/uncertainty.hpp"

namespace phonoloop {

enum class ProfileMode { kSimulated, kExternal };

std::string_view mode_name(ProfileMode mode);
ProfileMode mode_from_name(std::string_view name);

inline constexpr std::uint32_t kSecondsPerPromptWord = 2;
inline constexpr std::uint32_t kSecondsPerCorrection = 5;

struct ProfileConfig {
  std::string lexicon_ref;
  ProfileMode mode = ProfileMode::kSimulated;
  std::optional<SpeakerSpec> speaker_spec;
  std::uint64_t seed = 0;
  Strategy strategy = Strategy::kUncertainty;
  std::size_t cold_start_budget = kDefaultCoverageBudget;
  std::size_t eval_words = 100;
  std::size_t eval_renderings = 1;
  std::size_t passes = kDefaultPasses;
  std::size_t top_k = kDefaultTopK;
  BandThresholds bands;
  double difficulty_lambda = kDefaultDifficultyLambda;
  ModelParams model_params;
  std::string recognizer_endpoint;
  double gate_threshold_db = kDefaultGateThresholdDb;

  bool operator==(const ProfileConfig&) const = default;
};

nlohmann::json config_to_json(const ProfileConfig& config);
// Missing keys keep their defaults; throws BadConfig.
ProfileConfig config_from_json(const nlohmann::json& j);

struct IssuedPrompt {
  std::string ref;
  Prompt prompt;
  std::optional<std::size_t> chunk;  // cold-start chunk index
  std::size_t round = 0;

  bool operator==(const IssuedPrompt&) const = default;
};

struct RecordingRecord {
  Utterance utterance;
  std::string prompt_ref;
  std::uint64_t seq = 0;
  std::string audio_ref;  // stored WAV, empty when simulated
  std::optional<SnrReport> snr;

  bool operator==(const RecordingRecord&) const = default;
};

enum class CorrectionSource { kTopK, kManual };

std::string_view correction_source_name(CorrectionSource source);
CorrectionSource correction_source_from_name(std::string_view name);

struct CorrectionRecord {
  std::string utterance_id;
  std::size_t slot_index = 0;
  std::string chosen_word;
  CorrectionSource source = CorrectionSource::kTopK;
  std::string previous_word;
  // Manual entries only: explicit pronunciation for a new word. When empty
  // the observed slot phonemes are used.
  std::string pronunciation;

  bool operator==(const CorrectionRecord&) const = default;
};

nlohmann::json correction_to_json(const CorrectionRecord& c);
CorrectionRecord correction_from_json(const nlohmann::json& j);

struct TranscriptRecord {
  HypothesisSet hypotheses;
  AnnotatedTranscript transcript;
  std::uint64_t seq = 0;
  std::map<std::size_t, CorrectionRecord> corrections;

  bool operator==(const TranscriptRecord&) const = default;
};

struct MetricsEntry {
  std::size_t round = 0;
  std::optional<double> wer_eval;  // absent without a simulated speaker
  double minutes_interaction = 0.0;
  std::string strategy;
  std::size_t n_corrections = 0;
  double mean_phd = 0.0;

  bool operator==(const MetricsEntry&) const = default;
};

nlohmann::json metrics_to_json(const MetricsEntry& m);
MetricsEntry metrics_from_json(const nlohmann::json& j);

// Held-out words and their fixed simulated renderings.
struct EvalSet {
  std::vector<std::string> words;
  std::vector<std::vector<Pronunciation>> renderings;  // [rendering][word]

  bool operator==(const EvalSet&) const = default;
};

// Large, rarely changing members sit behind shared pointers so copying a
// state per event stays cheap.
struct ProfileState {
  std::string profile_id;
  ProfileConfig config;
  std::shared_ptr<const Lexicon> lexicon;   // base plus custom words
  std::shared_ptr<const Lexicon> training;  // lexicon minus eval words
  std::vector<std::string> custom_words;
  std::shared_ptr<const std::vector<SentenceTemplate>> templates;
  AdaptiveModel model;
  std::optional<SpeakerProfile> speaker;
  std::shared_ptr<const EvalSet> eval;
  PromptPlan cold_start;
  std::vector<bool> chunk_recorded;
  std::size_t plan_cursor = 0;  // first cold-start chunk not yet recorded
  std::size_t coverage_cursor = 0;
  std::map<std::string, std::shared_ptr<const IssuedPrompt>> prompts;
  std::map<std::string, std::shared_ptr<const RecordingRecord>> recordings;
  std::map<std::string, std::shared_ptr<const TranscriptRecord>> transcripts;
  std::size_t round = 0;
  std::size_t corrections_total = 0;
  std::size_t corrections_since_round = 0;
  std::uint64_t interaction_seconds = 0;
  std::vector<MetricsEntry> metrics;
  std::string created;
  std::string updated;
  std::uint64_t last_seq = 0;

  bool cold_start_complete() const noexcept { return plan_cursor >= cold_start.prompts.size(); }
  double minutes_interaction() const noexcept { return static_cast<double>(interaction_seconds) / 60.0; }
};

// Throws CorruptLog when the event does not follow the state.
ProfileState apply(ProfileState state, const SessionEvent& event);

// Canonical serialization; two states are equal iff their dumps match.
nlohmann::json state_to_json(const ProfileState& state);
ProfileState state_from_json(const nlohmann::json& j);

// Transcript with applied corrections overlaid (chosen word, Low band).
nlohmann::json transcript_view_json(const ProfileState& state, const std::string& utterance_id);

// Fraction of eval slots decoded wrongly under the posterior mean.
double evaluate_wer(const Lexicon& lexicon, const AdaptiveModel& model, const EvalSet& eval);
double evaluate_wer(const ProfileState& state);

nlohmann::json pronunciations_to_json(const PhonemeInventory& inventory, const std::vector<Pronunciation>& prons);
std::vector<Pronunciation> pronunciations_from_json(const PhonemeInventory& inventory, const nlohmann::json& j);
nlohmann::json lexicon_to_json(const Lexicon& lexicon);
Lexicon lexicon_from_json(const nlohmann::json& j);

}  // namespace phonoloop
