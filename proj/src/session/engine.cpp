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

#include "phonoloop/session/engine.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <mutex>
#include <random>
#include <set>

#include <boost/random/uniform_int_distribution.hpp>
#include <fmt/format.h>

#include "phonoloop/audio/wav.hpp"
#include "phonoloop/error.hpp"
#include "phonoloop/random.hpp"

namespace phonoloop {

namespace {

constexpr std::uint64_t kEvalTag = 0x5a3d1e0f00000020ULL;
constexpr std::uint64_t kSimulateTag = 0x5a3d1e0f00000021ULL;
constexpr std::uint64_t kTranscribeTag = 0x5a3d1e0f00000022ULL;
constexpr std::uint64_t kPromptTag = 0x5a3d1e0f00000023ULL;

void validate(const ProfileRequest& r) {
  const auto& c = r.config;
  if (r.lexicon.empty()) throw Error(ErrorCode::kBadConfig, "lexicon is empty");
  if (c.mode == ProfileMode::kSimulated && !c.speaker_spec) {
    throw Error(ErrorCode::kBadConfig, "simulated profiles need a speaker_spec");
  }
  if (c.mode == ProfileMode::kExternal && c.recognizer_endpoint.empty()) {
    throw Error(ErrorCode::kBadConfig, "external profiles need a recognizer endpoint");
  }
  if (c.passes < 2) throw Error(ErrorCode::kBadConfig, "passes must be at least 2");
  if (c.top_k < 1) throw Error(ErrorCode::kBadConfig, "top_k must be at least 1");
  if (c.mode == ProfileMode::kSimulated && c.eval_renderings < 1) {
    throw Error(ErrorCode::kBadConfig, "eval_renderings must be at least 1");
  }
  if (!(c.bands.medium <= c.bands.high)) throw Error(ErrorCode::kBadConfig, "band thresholds out of order");
}

std::vector<std::string> sample_eval_words(const Lexicon& lexicon, const std::vector<SentenceTemplate>& templates,
                                           std::size_t wanted, std::uint64_t seed) {
  std::set<std::string> literals;
  for (const auto& t : templates) {
    for (const auto& tok : t.tokens) {
      if (!tok.open) literals.insert(fold_case(tok.text));
    }
  }
  std::vector<std::size_t> pool;
  for (std::size_t i = 0; i < lexicon.size(); ++i) {
    if (literals.count(fold_case(lexicon.entries()[i].word)) == 0) pool.push_back(i);
  }
  const std::size_t n = std::min(wanted, pool.size() - pool.size() / 4);  // keep a quarter for training
  Rng rng = make_rng(seed, kEvalTag);
  for (std::size_t k = 0; k < n; ++k) {
    const auto j = boost::random::uniform_int_distribution<std::size_t>(k, pool.size() - 1)(rng);
    std::swap(pool[k], pool[j]);
  }
  pool.resize(n);
  std::sort(pool.begin(), pool.end());
  std::vector<std::string> words;
  for (auto i : pool) words.push_back(lexicon.entries()[i].word);
  return words;
}

nlohmann::json prompt_item(const std::string& ref, const Prompt& p, std::optional<std::size_t> chunk) {
  return {{"ref", ref},
          {"words", p.words},
          {"target_phonemes", p.target_phonemes},
          {"chunk", chunk ? nlohmann::json(*chunk) : nlohmann::json(nullptr)}};
}

bool has_whitespace(std::string_view s) {
  return std::any_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c) != 0; });
}

}  // namespace

struct SessionEngine::Slot {
  std::mutex write;
  mutable std::mutex read;
  std::shared_ptr<const ProfileState> state;
  std::unique_ptr<EventStore> store;
  std::map<std::string, std::string> audio;  // in-memory WAVs

  std::shared_ptr<const ProfileState> current() const {
    std::lock_guard lock(read);
    return state;
  }
  void publish(ProfileState next) {
    auto ptr = std::make_shared<const ProfileState>(std::move(next));
    std::lock_guard lock(read);
    state = std::move(ptr);
  }
};

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const auto secs = std::chrono::system_clock::to_time_t(now);
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count() % 1000;
  std::tm tm{};
  gmtime_r(&secs, &tm);
  return fmt::format("{:04}-{:02}-{:02}T{:02}:{:02}:{:02}.{:03}Z", tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday,
                     tm.tm_hour, tm.tm_min, tm.tm_sec, ms);
}

std::string random_profile_id() {
  std::random_device rd;
  const std::uint64_t v = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  return fmt::format("{:016x}", v);
}

SessionEngine::SessionEngine(EngineOptions options) : options_(std::move(options)) {
  if (!options_.clock) options_.clock = utc_timestamp;
  if (!options_.id_generator) options_.id_generator = random_profile_id;
  if (!options_.recognizer_factory) {
    options_.recognizer_factory = [](const std::string& endpoint) -> std::unique_ptr<ExternalRecognizer> {
      return std::make_unique<HttpRecognizerClient>(endpoint);
    };
  }
}

SessionEngine::~SessionEngine() = default;

std::size_t SessionEngine::load_all() {
  if (!options_.store_dir) return 0;
  std::size_t loaded = 0;
  for (const auto& id : list_profiles(*options_.store_dir)) {
    auto slot = std::make_unique<Slot>();
    slot->publish(load_profile(*options_.store_dir, id));
    slot->store = std::make_unique<EventStore>(*options_.store_dir, id, options_.snapshot_interval);
    std::unique_lock lock(mu_);
    slots_[id] = std::move(slot);
    ++loaded;
  }
  return loaded;
}

SessionEngine::Slot& SessionEngine::slot(const std::string& profile_id) const {
  std::shared_lock lock(mu_);
  const auto it = slots_.find(profile_id);
  if (it == slots_.end()) throw Error(ErrorCode::kUnknownProfile, profile_id);
  return *it->second;
}

std::shared_ptr<const ProfileState> SessionEngine::profile(const std::string& profile_id) const {
  return slot(profile_id).current();
}

std::vector<std::string> SessionEngine::profile_ids() const {
  std::shared_lock lock(mu_);
  std::vector<std::string> out;
  for (const auto& [id, s] : slots_) out.push_back(id);
  return out;
}

std::uint64_t SessionEngine::commit(Slot& slot, ProfileState& working, EventKind kind, nlohmann::json payload) {
  SessionEvent event{working.last_seq + 1, kind, options_.clock(), std::move(payload)};
  working = apply(std::move(working), event);
  if (slot.store) slot.store->append(event, working);
  return event.seq;
}

std::string SessionEngine::create_profile(const ProfileRequest& request) {
  validate(request);
  const auto& config = request.config;
  const auto& lexicon = request.lexicon;

  std::optional<SpeakerProfile> speaker;
  EvalSet eval;
  if (config.mode == ProfileMode::kSimulated) {
    speaker = make_speaker(lexicon.inventory(), *config.speaker_spec);
    eval.words = sample_eval_words(lexicon, request.templates, config.eval_words, config.seed);
    if (!eval.words.empty()) {
      for (std::size_t r = 0; r < config.eval_renderings; ++r) {
        eval.renderings.push_back(
            simulate_utterance(*speaker, eval.words, lexicon, derive_seed(config.seed, kEvalTag, r + 1)).observed);
      }
    }
  }
  std::set<std::string> held_out;
  for (const auto& w : eval.words) held_out.insert(fold_case(w));
  const auto training =
      lexicon.filtered([&](const LexiconEntry& e) { return held_out.count(fold_case(e.word)) == 0; });
  PromptPlan cold_start;
  try {
    cold_start = cold_start_plan(training, config.cold_start_budget);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kEmptyUniverse) throw Error(ErrorCode::kBadConfig, e.detail());
  }

  const AdaptiveModel fresh(lexicon.inventory(), config.model_params);
  MetricsEntry baseline;
  baseline.strategy = std::string(strategy_name(config.strategy));
  baseline.mean_phd = phoneme_difficulty_score(fresh, config.difficulty_lambda).mean_score();
  if (!eval.renderings.empty()) baseline.wer_eval = evaluate_wer(lexicon, fresh, eval);

  nlohmann::json templates = nlohmann::json::array();
  for (const auto& t : request.templates) templates.push_back(t.to_string());
  nlohmann::json renderings = nlohmann::json::array();
  for (const auto& r : eval.renderings) renderings.push_back(pronunciations_to_json(lexicon.inventory(), r));

  std::string id;
  {
    std::shared_lock lock(mu_);
    do {
      id = options_.id_generator();
    } while (slots_.count(id) != 0);
  }
  nlohmann::json payload = {{"profile_id", id},
                            {"config", config_to_json(config)},
                            {"lexicon", lexicon_to_json(lexicon)},
                            {"templates", std::move(templates)},
                            {"speaker", speaker ? speaker_to_json(*speaker) : nlohmann::json(nullptr)},
                            {"eval", {{"words", eval.words}, {"renderings", std::move(renderings)}}},
                            {"cold_start", plan_to_json(cold_start)},
                            {"baseline", metrics_to_json(baseline)}};

  auto slot = std::make_unique<Slot>();
  if (options_.store_dir) {
    slot->store = std::make_unique<EventStore>(*options_.store_dir, id, options_.snapshot_interval);
  }
  ProfileState working;
  commit(*slot, working, EventKind::kProfileCreated, std::move(payload));
  slot->publish(std::move(working));
  std::unique_lock lock(mu_);
  if (!slots_.emplace(id, std::move(slot)).second) throw Error(ErrorCode::kBadConfig, "profile id collision " + id);
  return id;
}

IssuedPlan SessionEngine::next_prompts(const std::string& profile_id, std::size_t n) {
  auto& s = slot(profile_id);
  std::lock_guard lock(s.write);
  ProfileState working = *s.current();
  IssuedPlan issued;
  issued.plan.round = working.round + 1;
  if (n == 0) return issued;

  std::vector<std::optional<std::size_t>> chunks;
  std::size_t coverage_cursor = working.coverage_cursor;
  if (!working.cold_start_complete()) {
    for (std::size_t c = working.plan_cursor; c < working.cold_start.prompts.size() && chunks.size() < n; ++c) {
      if (working.chunk_recorded[c]) continue;
      issued.plan.prompts.push_back(working.cold_start.prompts[c]);
      chunks.push_back(c);
    }
  } else {
    CurriculumContext context;
    context.training = working.training.get();
    context.model = &working.model;
    context.templates = *working.templates;
    context.cold_start_complete = true;
    context.coverage_cursor = working.coverage_cursor;
    context.generator = options_.generator.get();
    context.difficulty_lambda = working.config.difficulty_lambda;
    const auto nonce = derive_seed(working.config.seed, kPromptTag, working.last_seq + 1);
    auto plan = select_next_prompts(context, n, working.config.strategy, nonce);
    issued.plan.prompts = std::move(plan.prompts);
    chunks.assign(issued.plan.prompts.size(), std::nullopt);
    if (working.config.strategy == Strategy::kCoverageOnly) coverage_cursor += issued.plan.word_count();
  }

  const auto seq = working.last_seq + 1;
  nlohmann::json items = nlohmann::json::array();
  for (std::size_t i = 0; i < issued.plan.prompts.size(); ++i) {
    issued.prompt_refs.push_back(fmt::format("p{}-{}", seq, i));
    items.push_back(prompt_item(issued.prompt_refs.back(), issued.plan.prompts[i], chunks[i]));
  }
  commit(s, working, EventKind::kPromptIssued,
         {{"round", issued.plan.round},
          {"strategy", strategy_name(working.config.strategy)},
          {"prompts", std::move(items)},
          {"coverage_cursor", coverage_cursor}});
  s.publish(std::move(working));
  return issued;
}

RecordingOutcome SessionEngine::submit_recording(const std::string& profile_id, const std::string& prompt_ref,
                                                 const RecordingPayload& payload) {
  auto& s = slot(profile_id);
  std::lock_guard lock(s.write);
  ProfileState working = *s.current();
  const auto prompt = working.prompts.find(prompt_ref);
  if (prompt == working.prompts.end()) throw Error(ErrorCode::kUnknownPrompt, prompt_ref);
  const auto& config = working.config;
  if (payload.simulate && config.mode != ProfileMode::kSimulated) {
    throw Error(ErrorCode::kBadConfig, "simulated recordings need a simulated profile");
  }

  RecordingOutcome outcome;
  if (!payload.simulate) {
    const auto report = estimate_snr(parse_wav(payload.wav), config.gate_threshold_db);
    outcome.snr = report;
    if (!report.accepted) {
      commit(s, working, EventKind::kRecordingRejected,
             {{"prompt_ref", prompt_ref}, {"snr", snr_report_to_json(report)}});
      s.publish(std::move(working));
      return outcome;
    }
  }

  const auto seq = working.last_seq + 1;
  const auto uid = fmt::format("u{}", seq);
  const auto& words = prompt->second->prompt.words;
  Utterance utterance;
  if (config.mode == ProfileMode::kSimulated) {
    utterance = simulate_utterance(*working.speaker, words, *working.lexicon,
                                   derive_seed(config.seed, kSimulateTag, seq));
    utterance.source = payload.simulate ? UtteranceSource::kSimulated : UtteranceSource::kUploaded;
  } else {
    utterance.prompt_words = words;
    utterance.source = UtteranceSource::kExternal;
  }
  utterance.id = uid;

  std::string audio_ref;
  if (!payload.simulate) {
    if (options_.store_dir) {
      const auto dir = *options_.store_dir / profile_id / "audio";
      std::filesystem::create_directories(dir);
      const auto path = dir / (uid + ".wav");
      std::ofstream out(path, std::ios::binary | std::ios::trunc);
      out << payload.wav;
      if (!out) throw Error(ErrorCode::kIoError, "cannot store " + path.string());
      audio_ref = std::filesystem::absolute(path).string();
    } else {
      audio_ref = "mem:" + profile_id + "/" + uid;
      s.audio[audio_ref] = payload.wav;
    }
  }

  commit(s, working, EventKind::kRecordingAccepted,
         {{"utterance_id", uid},
          {"prompt_ref", prompt_ref},
          {"prompt_words", utterance.prompt_words},
          {"observed", pronunciations_to_json(working.lexicon->inventory(), utterance.observed)},
          {"source", source_name(utterance.source)},
          {"audio_ref", audio_ref},
          {"snr", outcome.snr ? snr_report_to_json(*outcome.snr) : nlohmann::json(nullptr)}});
  s.publish(std::move(working));
  outcome.accepted = true;
  outcome.utterance_id = uid;
  return outcome;
}

AnnotatedTranscript SessionEngine::transcribe(const std::string& profile_id, const std::string& utterance_id) {
  auto& s = slot(profile_id);
  std::lock_guard lock(s.write);
  ProfileState working = *s.current();
  const auto rec = working.recordings.find(utterance_id);
  if (rec == working.recordings.end()) throw Error(ErrorCode::kUnknownUtterance, utterance_id);
  const auto& config = working.config;
  const auto& lexicon = *working.lexicon;

  Utterance utterance = rec->second->utterance;
  HypothesisSet hypotheses;
  nlohmann::json payload = {{"utterance_id", utterance_id}};
  if (config.mode == ProfileMode::kSimulated) {
    hypotheses = ensemble_pass(utterance, working.model, lexicon, config.passes,
                               derive_seed(config.seed, kTranscribeTag, rec->second->seq));
  } else {
    auto recognizer = options_.recognizer_factory(config.recognizer_endpoint);
    hypotheses = recognizer->recognize(rec->second->audio_ref, config.passes);
    const auto& coherent = hypotheses.coherent();
    if (coherent.slot_phonemes.size() != coherent.words.size()) {
      throw Error(ErrorCode::kProtocolViolation, "coherent hypothesis lacks slot phonemes");
    }
    utterance.observed.clear();
    for (const auto& slot_symbols : coherent.slot_phonemes) {
      Pronunciation pron;
      for (const auto& sym : slot_symbols) {
        const auto p = lexicon.inventory().find(sym);
        if (!p) throw Error(ErrorCode::kProtocolViolation, "phoneme '" + sym + "' outside the inventory");
        pron.push_back(*p);
      }
      utterance.observed.push_back(std::move(pron));
    }
    payload["observed"] = pronunciations_to_json(lexicon.inventory(), utterance.observed);
  }
  auto transcript = annotate(hypotheses, working.model, lexicon, utterance, config.bands, config.top_k);
  payload["hypotheses"] = hypothesis_set_to_json(hypotheses);
  payload["transcript"] = transcript_to_json(transcript);
  commit(s, working, EventKind::kTranscriptIssued, std::move(payload));
  s.publish(std::move(working));
  return transcript;
}

CorrectionAck SessionEngine::apply_correction(const std::string& profile_id, CorrectionRecord correction) {
  auto& s = slot(profile_id);
  std::lock_guard lock(s.write);
  ProfileState working = *s.current();
  const auto rec = working.recordings.find(correction.utterance_id);
  const auto t = working.transcripts.find(correction.utterance_id);
  if (rec == working.recordings.end() || t == working.transcripts.end()) {
    throw Error(ErrorCode::kUnknownUtterance, "no transcript for '" + correction.utterance_id + "'");
  }
  const auto& transcript = t->second->transcript;
  if (correction.slot_index >= transcript.slots.size()) {
    throw Error(ErrorCode::kUnknownSlot, std::to_string(correction.slot_index));
  }
  if (correction.chosen_word.empty() || has_whitespace(correction.chosen_word)) {
    throw Error(ErrorCode::kBadConfig, "chosen_word must be a single word");
  }
  CorrectionAck ack;
  if (const auto prior = t->second->corrections.find(correction.slot_index); prior != t->second->corrections.end()) {
    if (fold_case(prior->second.chosen_word) != fold_case(correction.chosen_word)) {
      throw Error(ErrorCode::kSlotAlreadyCorrected,
                  "slot " + std::to_string(correction.slot_index) + " already corrected to '" +
                      prior->second.chosen_word + "'");
    }
    ack.seq = working.last_seq;
    return ack;
  }

  const auto& slot_info = transcript.slots[correction.slot_index];
  correction.previous_word = slot_info.word;
  const auto folded = fold_case(correction.chosen_word);
  if (correction.source == CorrectionSource::kTopK) {
    const bool offered = folded == fold_case(slot_info.word) ||
                         std::any_of(slot_info.alternatives.begin(), slot_info.alternatives.end(),
                                     [&](const std::string& w) { return fold_case(w) == folded; });
    if (!offered) throw Error(ErrorCode::kAlternativeMismatch, "'" + correction.chosen_word + "' was not offered");
  }

  nlohmann::json payload;
  const auto& lexicon = *working.lexicon;
  if (const auto* entry = lexicon.find(correction.chosen_word)) {
    correction.chosen_word = entry->word;
    correction.pronunciation.clear();
  } else if (correction.source == CorrectionSource::kManual) {
    Pronunciation pron;
    if (!correction.pronunciation.empty()) {
      try {
        pron = lexicon.inventory().parse_pronunciation(correction.pronunciation);
      } catch (const Error& e) {
        throw Error(ErrorCode::kBadConfig, e.detail());
      }
    } else {
      pron = rec->second->utterance.observed.at(correction.slot_index);
    }
    if (pron.empty()) throw Error(ErrorCode::kBadConfig, "no pronunciation available for '" + correction.chosen_word + "'");
    correction.pronunciation = lexicon.inventory().format(pron);
    payload["added_entry"] = {{"word", correction.chosen_word}, {"pron", correction.pronunciation}, {"weight", 1.0}};
    ack.added_to_lexicon = true;
  } else {
    throw Error(ErrorCode::kUnknownWord, correction.chosen_word);
  }
  payload["correction"] = correction_to_json(correction);
  ack.seq = commit(s, working, EventKind::kCorrectionApplied, std::move(payload));
  ack.applied = true;
  s.publish(std::move(working));
  return ack;
}

MetricsEntry SessionEngine::run_adaptation_round(const std::string& profile_id) {
  auto& s = slot(profile_id);
  std::lock_guard lock(s.write);
  ProfileState working = *s.current();
  if (working.corrections_since_round == 0) {
    throw Error(ErrorCode::kNothingToAdapt, "no corrections since round " + std::to_string(working.round));
  }
  const auto difficulty = phoneme_difficulty_score(working.model, working.config.difficulty_lambda);
  MetricsEntry m;
  m.round = working.round + 1;
  if (working.eval && !working.eval->renderings.empty()) m.wer_eval = evaluate_wer(working);
  m.minutes_interaction = working.minutes_interaction();
  m.strategy = std::string(strategy_name(working.config.strategy));
  m.n_corrections = working.corrections_total;
  m.mean_phd = difficulty.mean_score();
  commit(s, working, EventKind::kAdaptationRound,
         {{"metrics", metrics_to_json(m)}, {"difficulty", difficulty_to_json(difficulty)}});
  s.publish(std::move(working));
  return m;
}

std::shared_ptr<const ProfileState> SessionEngine::reset_acoustic_baseline(const std::string& profile_id) {
  auto& s = slot(profile_id);
  std::lock_guard lock(s.write);
  ProfileState working = *s.current();
  commit(s, working, EventKind::kAcousticReset, nlohmann::json::object());
  s.publish(std::move(working));
  return s.current();
}

std::string SessionEngine::audio_bytes(const std::string& profile_id, const std::string& audio_ref) const {
  auto& s = slot(profile_id);
  {
    std::lock_guard lock(s.write);
    if (const auto it = s.audio.find(audio_ref); it != s.audio.end()) return it->second;
  }
  std::ifstream in(audio_ref, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "no audio at " + audio_ref);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace phonoloop
