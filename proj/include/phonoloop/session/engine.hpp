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

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "phonoloop/curriculum/curriculum.hpp"
#include "phonoloop/recognizer/external.hpp"
#include "phonoloop/session/profile_state.hpp"
#include "phonoloop/session/store.hpp"

namespace phonoloop {

struct ProfileRequest {
  Lexicon lexicon;
  std::vector<SentenceTemplate> templates;
  ProfileConfig config;
};

struct RecordingPayload {
  bool simulate = false;
  std::string wav;  // raw file bytes when not simulating
};

struct RecordingOutcome {
  bool accepted = false;
  std::string utterance_id;
  std::optional<SnrReport> snr;
};

struct IssuedPlan {
  PromptPlan plan;
  std::vector<std::string> prompt_refs;  // parallel to plan.prompts
};

struct CorrectionAck {
  bool applied = false;  // false for a repeated identical correction
  std::uint64_t seq = 0;
  bool added_to_lexicon = false;
};

using RecognizerFactory = std::function<std::unique_ptr<ExternalRecognizer>(const std::string& endpoint)>;

struct EngineOptions {
  std::optional<std::filesystem::path> store_dir;  // in-memory when unset
  std::size_t snapshot_interval = kDefaultSnapshotInterval;
  std::function<std::string()> clock;         // UTC ISO-8601 by default
  std::function<std::string()> id_generator;  // random hex by default
  RecognizerFactory recognizer_factory;       // HttpRecognizerClient by default
  std::shared_ptr<TextGenerator> generator;
};

// Profiles are independent. Mutations of one profile are serialized by its
// writer lock; readers take the latest published immutable state.
class SessionEngine {
 public:
  explicit SessionEngine(EngineOptions options = {});
  ~SessionEngine();
  SessionEngine(const SessionEngine&) = delete;
  SessionEngine& operator=(const SessionEngine&) = delete;

  // Replays every profile under the store directory; returns the count.
  std::size_t load_all();

  // Throws BadConfig, BadSpec.
  std::string create_profile(const ProfileRequest& request);

  // Throws UnknownProfile.
  std::shared_ptr<const ProfileState> profile(const std::string& profile_id) const;
  std::vector<std::string> profile_ids() const;

  IssuedPlan next_prompts(const std::string& profile_id, std::size_t n);
  // Gate rejections are returned, not thrown, and logged as
  // RecordingRejected. Throws UnknownPrompt, UnsupportedFormat, TooShort.
  RecordingOutcome submit_recording(const std::string& profile_id, const std::string& prompt_ref,
                                    const RecordingPayload& payload);
  AnnotatedTranscript transcribe(const std::string& profile_id, const std::string& utterance_id);
  // Throws UnknownUtterance, UnknownSlot, AlternativeMismatch,
  // SlotAlreadyCorrected.
  CorrectionAck apply_correction(const std::string& profile_id, CorrectionRecord correction);
  // Throws NothingToAdapt.
  MetricsEntry run_adaptation_round(const std::string& profile_id);
  std::shared_ptr<const ProfileState> reset_acoustic_baseline(const std::string& profile_id);

  std::string audio_bytes(const std::string& profile_id, const std::string& audio_ref) const;

 private:
  struct Slot;
  Slot& slot(const std::string& profile_id) const;
  std::uint64_t commit(Slot& slot, ProfileState& working, EventKind kind, nlohmann::json payload);

  EngineOptions options_;
  mutable std::shared_mutex mu_;
  std::map<std::string, std::unique_ptr<Slot>> slots_;
};

std::string utc_timestamp();
std::string random_profile_id();

}  // namespace phonoloop
