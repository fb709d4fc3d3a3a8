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

#include "phonoloop/session/profile_state.hpp"

#include <algorithm>
#include <set>

#include "phonoloop/error.hpp"

namespace phonoloop {

namespace {

[[noreturn]] void corrupt(const std::string& why) { throw Error(ErrorCode::kCorruptLog, why); }

nlohmann::json snr_to_json(const std::optional<SnrReport>& snr) {
  return snr ? snr_report_to_json(*snr) : nlohmann::json(nullptr);
}

std::optional<SnrReport> snr_from_json(const nlohmann::json& j) {
  if (j.is_null()) return std::nullopt;
  SnrReport r;
  r.snr_db = j.at("snr_db").get<double>();
  r.noise_floor = j.at("noise_floor").get<double>();
  r.speech_level = j.at("speech_level").get<double>();
  r.accepted = j.at("accepted").get<bool>();
  r.threshold_db = j.at("threshold_db").get<double>();
  return r;
}

nlohmann::json recording_to_json(const PhonemeInventory& inv, const RecordingRecord& r) {
  return {{"utterance_id", r.utterance.id},
          {"prompt_ref", r.prompt_ref},
          {"prompt_words", r.utterance.prompt_words},
          {"observed", pronunciations_to_json(inv, r.utterance.observed)},
          {"source", source_name(r.utterance.source)},
          {"seq", r.seq},
          {"audio_ref", r.audio_ref},
          {"snr", snr_to_json(r.snr)}};
}

RecordingRecord recording_from_json(const PhonemeInventory& inv, const nlohmann::json& j) {
  RecordingRecord r;
  r.utterance.id = j.at("utterance_id").get<std::string>();
  r.utterance.prompt_words = j.at("prompt_words").get<std::vector<std::string>>();
  r.utterance.observed = pronunciations_from_json(inv, j.at("observed"));
  r.utterance.source = source_from_name(j.at("source").get<std::string>());
  r.prompt_ref = j.at("prompt_ref").get<std::string>();
  r.seq = j.value("seq", std::uint64_t{0});
  r.audio_ref = j.value("audio_ref", std::string());
  r.snr = snr_from_json(j.value("snr", nlohmann::json(nullptr)));
  return r;
}

nlohmann::json issued_to_json(const IssuedPrompt& p) {
  return {{"ref", p.ref},
          {"words", p.prompt.words},
          {"target_phonemes", p.prompt.target_phonemes},
          {"chunk", p.chunk ? nlohmann::json(*p.chunk) : nlohmann::json(nullptr)},
          {"round", p.round}};
}

IssuedPrompt issued_from_json(const nlohmann::json& j, std::size_t round) {
  IssuedPrompt p;
  p.ref = j.at("ref").get<std::string>();
  p.prompt.words = j.at("words").get<std::vector<std::string>>();
  p.prompt.target_phonemes = j.value("target_phonemes", std::vector<std::string>{});
  if (j.contains("chunk") && !j.at("chunk").is_null()) p.chunk = j.at("chunk").get<std::size_t>();
  p.round = j.value("round", round);
  return p;
}

nlohmann::json transcript_record_to_json(const TranscriptRecord& t) {
  nlohmann::json corrections = nlohmann::json::array();
  for (const auto& [slot, c] : t.corrections) corrections.push_back(correction_to_json(c));
  return {{"hypotheses", hypothesis_set_to_json(t.hypotheses)},
          {"transcript", transcript_to_json(t.transcript)},
          {"seq", t.seq},
          {"corrections", std::move(corrections)}};
}

TranscriptRecord transcript_record_from_json(const nlohmann::json& j) {
  TranscriptRecord t;
  t.hypotheses = hypothesis_set_from_json(j.at("hypotheses"));
  t.transcript = transcript_from_json(j.at("transcript"));
  t.seq = j.at("seq").get<std::uint64_t>();
  for (const auto& c : j.at("corrections")) {
    auto rec = correction_from_json(c);
    t.corrections.emplace(rec.slot_index, std::move(rec));
  }
  return t;
}

std::vector<SentenceTemplate> templates_from_json(const nlohmann::json& j) {
  std::vector<SentenceTemplate> out;
  for (const auto& line : j) out.push_back(SentenceTemplate::parse(line.get<std::string>()));
  return out;
}

nlohmann::json templates_to_json(const std::vector<SentenceTemplate>& templates) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& t : templates) out.push_back(t.to_string());
  return out;
}

nlohmann::json eval_to_json(const PhonemeInventory& inv, const EvalSet& eval) {
  nlohmann::json renderings = nlohmann::json::array();
  for (const auto& r : eval.renderings) renderings.push_back(pronunciations_to_json(inv, r));
  return {{"words", eval.words}, {"renderings", std::move(renderings)}};
}

EvalSet eval_from_json(const PhonemeInventory& inv, const nlohmann::json& j) {
  EvalSet eval;
  eval.words = j.at("words").get<std::vector<std::string>>();
  for (const auto& r : j.at("renderings")) {
    eval.renderings.push_back(pronunciations_from_json(inv, r));
    if (eval.renderings.back().size() != eval.words.size()) corrupt("eval rendering size mismatch");
  }
  return eval;
}

Lexicon training_lexicon(const Lexicon& lexicon, const EvalSet& eval) {
  std::set<std::string> held_out;
  for (const auto& w : eval.words) held_out.insert(fold_case(w));
  return lexicon.filtered([&](const LexiconEntry& e) { return held_out.count(fold_case(e.word)) == 0; });
}

void advance_plan_cursor(ProfileState& s) {
  while (s.plan_cursor < s.chunk_recorded.size() && s.chunk_recorded[s.plan_cursor]) ++s.plan_cursor;
}

void apply_created(ProfileState& s, const SessionEvent& ev) {
  if (s.last_seq != 0) corrupt("ProfileCreated after seq " + std::to_string(s.last_seq));
  const auto& p = ev.payload;
  s.profile_id = p.at("profile_id").get<std::string>();
  s.config = config_from_json(p.at("config"));
  auto lexicon = std::make_shared<const Lexicon>(lexicon_from_json(p.at("lexicon")));
  s.lexicon = lexicon;
  s.templates = std::make_shared<const std::vector<SentenceTemplate>>(templates_from_json(p.at("templates")));
  s.model = AdaptiveModel(lexicon->inventory(), s.config.model_params);
  if (p.contains("speaker") && !p.at("speaker").is_null()) s.speaker = speaker_from_json(p.at("speaker"));
  auto eval = std::make_shared<const EvalSet>(eval_from_json(lexicon->inventory(), p.at("eval")));
  s.training = std::make_shared<const Lexicon>(training_lexicon(*lexicon, *eval));
  s.eval = std::move(eval);
  s.cold_start = plan_from_json(p.at("cold_start"));
  s.chunk_recorded.assign(s.cold_start.prompts.size(), false);
  s.plan_cursor = 0;
  s.metrics.push_back(metrics_from_json(p.at("baseline")));
  s.created = ev.timestamp;
}

void apply_prompt_issued(ProfileState& s, const SessionEvent& ev) {
  const auto& p = ev.payload;
  const auto round = p.at("round").get<std::size_t>();
  for (const auto& item : p.at("prompts")) {
    auto issued = std::make_shared<const IssuedPrompt>(issued_from_json(item, round));
    if (issued->chunk && *issued->chunk >= s.cold_start.prompts.size()) corrupt("chunk index out of range");
    if (!s.prompts.emplace(issued->ref, issued).second) corrupt("duplicate prompt ref " + issued->ref);
  }
  s.coverage_cursor = p.value("coverage_cursor", s.coverage_cursor);
}

void apply_recording(ProfileState& s, const SessionEvent& ev) {
  auto rec = recording_from_json(s.lexicon->inventory(), ev.payload);
  rec.seq = ev.seq;
  const auto prompt = s.prompts.find(rec.prompt_ref);
  if (prompt == s.prompts.end()) corrupt("recording for unknown prompt " + rec.prompt_ref);
  if (prompt->second->chunk) {
    s.chunk_recorded[*prompt->second->chunk] = true;
    advance_plan_cursor(s);
  }
  s.interaction_seconds += kSecondsPerPromptWord * rec.utterance.prompt_words.size();
  const auto id = rec.utterance.id;
  if (!s.recordings.emplace(id, std::make_shared<const RecordingRecord>(std::move(rec))).second) {
    corrupt("duplicate utterance " + id);
  }
}

void apply_transcript(ProfileState& s, const SessionEvent& ev) {
  const auto& p = ev.payload;
  const auto uid = p.at("utterance_id").get<std::string>();
  const auto rec = s.recordings.find(uid);
  if (rec == s.recordings.end()) corrupt("transcript for unknown utterance " + uid);
  if (p.contains("observed")) {
    auto updated = *rec->second;
    updated.utterance.observed = pronunciations_from_json(s.lexicon->inventory(), p.at("observed"));
    rec->second = std::make_shared<const RecordingRecord>(std::move(updated));
  }
  TranscriptRecord t;
  t.hypotheses = hypothesis_set_from_json(p.at("hypotheses"));
  t.transcript = transcript_from_json(p.at("transcript"));
  t.seq = ev.seq;
  if (const auto old = s.transcripts.find(uid); old != s.transcripts.end()) t.corrections = old->second->corrections;
  s.transcripts[uid] = std::make_shared<const TranscriptRecord>(std::move(t));
}

void apply_correction(ProfileState& s, const SessionEvent& ev) {
  const auto& p = ev.payload;
  auto c = correction_from_json(p.at("correction"));
  const auto t = s.transcripts.find(c.utterance_id);
  if (t == s.transcripts.end()) corrupt("correction for unknown transcript " + c.utterance_id);
  const auto& observed = s.recordings.at(c.utterance_id)->utterance.observed;
  if (c.slot_index >= observed.size()) corrupt("correction slot out of range");
  if (p.contains("added_entry")) {
    const auto& a = p.at("added_entry");
    LexiconEntry entry{a.at("word").get<std::string>(),
                       s.lexicon->inventory().parse_pronunciation(a.at("pron").get<std::string>()),
                       a.value("weight", 1.0), a.value("category", std::string())};
    auto lexicon = *s.lexicon;
    lexicon.add(entry);
    auto training = *s.training;
    training.add(entry);
    s.lexicon = std::make_shared<const Lexicon>(std::move(lexicon));
    s.training = std::make_shared<const Lexicon>(std::move(training));
    s.custom_words.push_back(entry.word);
  }
  s.model = update_from_correction(std::move(s.model), c.chosen_word, observed[c.slot_index], *s.lexicon);
  auto record = *t->second;
  record.corrections[c.slot_index] = std::move(c);
  t->second = std::make_shared<const TranscriptRecord>(std::move(record));
  s.interaction_seconds += kSecondsPerCorrection;
  ++s.corrections_total;
  ++s.corrections_since_round;
}

void apply_adaptation(ProfileState& s, const SessionEvent& ev) {
  auto m = metrics_from_json(ev.payload.at("metrics"));
  if (m.round != s.round + 1) corrupt("adaptation round " + std::to_string(m.round) + " out of order");
  s.round = m.round;
  s.metrics.push_back(std::move(m));
  s.corrections_since_round = 0;
}

void apply_reset(ProfileState& s) {
  s.model = reset_acoustic(std::move(s.model));
  std::fill(s.chunk_recorded.begin(), s.chunk_recorded.end(), false);
  s.plan_cursor = 0;
}

}  // namespace

std::string_view mode_name(ProfileMode mode) { return mode == ProfileMode::kSimulated ? "simulated" : "external"; }

ProfileMode mode_from_name(std::string_view name) {
  if (name == "simulated") return ProfileMode::kSimulated;
  if (name == "external") return ProfileMode::kExternal;
  throw Error(ErrorCode::kBadConfig, "unknown mode '" + std::string(name) + "'");
}

std::string_view correction_source_name(CorrectionSource source) {
  return source == CorrectionSource::kTopK ? "topk" : "manual";
}

CorrectionSource correction_source_from_name(std::string_view name) {
  if (name == "topk") return CorrectionSource::kTopK;
  if (name == "manual") return CorrectionSource::kManual;
  throw Error(ErrorCode::kBadConfig, "unknown correction source '" + std::string(name) + "'");
}

nlohmann::json config_to_json(const ProfileConfig& c) {
  return {{"lexicon_ref", c.lexicon_ref},
          {"mode", mode_name(c.mode)},
          {"speaker_spec", c.speaker_spec ? speaker_spec_to_json(*c.speaker_spec) : nlohmann::json(nullptr)},
          {"seed", c.seed},
          {"strategy", strategy_name(c.strategy)},
          {"cold_start_budget", c.cold_start_budget},
          {"eval_words", c.eval_words},
          {"eval_renderings", c.eval_renderings},
          {"passes", c.passes},
          {"top_k", c.top_k},
          {"band_medium", c.bands.medium},
          {"band_high", c.bands.high},
          {"difficulty_lambda", c.difficulty_lambda},
          {"delta", c.model_params.delta},
          {"iota", c.model_params.iota},
          {"prior_self", c.model_params.prior_self},
          {"prior_other", c.model_params.prior_other},
          {"recognizer_endpoint", c.recognizer_endpoint},
          {"gate_threshold_db", c.gate_threshold_db}};
}

ProfileConfig config_from_json(const nlohmann::json& j) {
  try {
    if (!j.is_object()) throw Error(ErrorCode::kBadConfig, "profile config must be an object");
    ProfileConfig c;
    c.lexicon_ref = j.value("lexicon_ref", c.lexicon_ref);
    if (j.contains("mode")) c.mode = mode_from_name(j.at("mode").get<std::string>());
    if (j.contains("speaker_spec") && !j.at("speaker_spec").is_null()) {
      c.speaker_spec = speaker_spec_from_json(j.at("speaker_spec"));
    }
    c.seed = j.value("seed", c.seed);
    if (j.contains("strategy")) c.strategy = strategy_from_name(j.at("strategy").get<std::string>());
    c.cold_start_budget = j.value("cold_start_budget", c.cold_start_budget);
    c.eval_words = j.value("eval_words", c.eval_words);
    c.eval_renderings = j.value("eval_renderings", c.eval_renderings);
    c.passes = j.value("passes", c.passes);
    c.top_k = j.value("top_k", c.top_k);
    c.bands.medium = j.value("band_medium", c.bands.medium);
    c.bands.high = j.value("band_high", c.bands.high);
    c.difficulty_lambda = j.value("difficulty_lambda", c.difficulty_lambda);
    c.model_params.delta = j.value("delta", c.model_params.delta);
    c.model_params.iota = j.value("iota", c.model_params.iota);
    c.model_params.prior_self = j.value("prior_self", c.model_params.prior_self);
    c.model_params.prior_other = j.value("prior_other", c.model_params.prior_other);
    c.recognizer_endpoint = j.value("recognizer_endpoint", c.recognizer_endpoint);
    c.gate_threshold_db = j.value("gate_threshold_db", c.gate_threshold_db);
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kBadConfig, std::string("profile config: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kBadConfig) throw;
    throw Error(ErrorCode::kBadConfig, e.detail());
  }
}

nlohmann::json correction_to_json(const CorrectionRecord& c) {
  nlohmann::json j = {{"utterance_id", c.utterance_id},
                      {"slot_index", c.slot_index},
                      {"chosen_word", c.chosen_word},
                      {"source", correction_source_name(c.source)},
                      {"previous_word", c.previous_word}};
  if (!c.pronunciation.empty()) j["pronunciation"] = c.pronunciation;
  return j;
}

CorrectionRecord correction_from_json(const nlohmann::json& j) {
  try {
    CorrectionRecord c;
    c.utterance_id = j.at("utterance_id").get<std::string>();
    c.slot_index = j.at("slot_index").get<std::size_t>();
    c.chosen_word = j.at("chosen_word").get<std::string>();
    c.source = correction_source_from_name(j.value("source", std::string("topk")));
    c.previous_word = j.value("previous_word", std::string());
    c.pronunciation = j.value("pronunciation", std::string());
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kBadConfig, std::string("correction: ") + e.what());
  }
}

nlohmann::json metrics_to_json(const MetricsEntry& m) {
  return {{"round", m.round},
          {"wer_eval", m.wer_eval ? nlohmann::json(*m.wer_eval) : nlohmann::json(nullptr)},
          {"minutes_interaction", m.minutes_interaction},
          {"strategy", m.strategy},
          {"n_corrections", m.n_corrections},
          {"mean_phd", m.mean_phd}};
}

MetricsEntry metrics_from_json(const nlohmann::json& j) {
  MetricsEntry m;
  m.round = j.at("round").get<std::size_t>();
  if (!j.at("wer_eval").is_null()) m.wer_eval = j.at("wer_eval").get<double>();
  m.minutes_interaction = j.at("minutes_interaction").get<double>();
  m.strategy = j.at("strategy").get<std::string>();
  m.n_corrections = j.at("n_corrections").get<std::size_t>();
  m.mean_phd = j.at("mean_phd").get<double>();
  return m;
}

nlohmann::json pronunciations_to_json(const PhonemeInventory& inventory, const std::vector<Pronunciation>& prons) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& pron : prons) {
    nlohmann::json slot = nlohmann::json::array();
    for (auto p : pron) slot.push_back(inventory.symbol(p));
    out.push_back(std::move(slot));
  }
  return out;
}

std::vector<Pronunciation> pronunciations_from_json(const PhonemeInventory& inventory, const nlohmann::json& j) {
  std::vector<Pronunciation> out;
  for (const auto& slot : j) {
    Pronunciation pron;
    for (const auto& sym : slot) pron.push_back(inventory.at(sym.get<std::string>()));
    out.push_back(std::move(pron));
  }
  return out;
}

nlohmann::json lexicon_to_json(const Lexicon& lexicon) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : lexicon.entries()) {
    entries.push_back({{"word", e.word},
                       {"pron", lexicon.inventory().format(e.pron)},
                       {"weight", e.weight},
                       {"category", e.category}});
  }
  return {{"inventory", lexicon.inventory().symbols()}, {"entries", std::move(entries)}};
}

Lexicon lexicon_from_json(const nlohmann::json& j) {
  try {
    PhonemeInventory inventory(j.at("inventory").get<std::vector<std::string>>());
    std::vector<LexiconEntry> entries;
    for (const auto& e : j.at("entries")) {
      entries.push_back({e.at("word").get<std::string>(),
                         inventory.parse_pronunciation(e.at("pron").get<std::string>()),
                         e.value("weight", 1.0), e.value("category", std::string())});
    }
    return Lexicon(std::move(inventory), std::move(entries));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("lexicon: ") + e.what());
  }
}

ProfileState apply(ProfileState state, const SessionEvent& event) {
  if (event.seq != state.last_seq + 1) {
    corrupt("expected seq " + std::to_string(state.last_seq + 1) + ", got " + std::to_string(event.seq));
  }
  if (event.kind != EventKind::kProfileCreated && state.last_seq == 0) corrupt("log does not start with ProfileCreated");
  try {
    switch (event.kind) {
      case EventKind::kProfileCreated: apply_created(state, event); break;
      case EventKind::kPromptIssued: apply_prompt_issued(state, event); break;
      case EventKind::kRecordingAccepted: apply_recording(state, event); break;
      case EventKind::kRecordingRejected: break;
      case EventKind::kTranscriptIssued: apply_transcript(state, event); break;
      case EventKind::kCorrectionApplied: apply_correction(state, event); break;
      case EventKind::kAdaptationRound: apply_adaptation(state, event); break;
      case EventKind::kAcousticReset: apply_reset(state); break;
    }
  } catch (const nlohmann::json::exception& e) {
    corrupt(std::string(event_kind_name(event.kind)) + " payload: " + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kCorruptLog) throw;
    corrupt(std::string(event_kind_name(event.kind)) + ": " + e.what());
  }
  state.last_seq = event.seq;
  state.updated = event.timestamp;
  return state;
}

nlohmann::json state_to_json(const ProfileState& s) {
  if (!s.lexicon) return nlohmann::json::object();
  const auto& inv = s.lexicon->inventory();
  nlohmann::json prompts = nlohmann::json::array();
  for (const auto& [ref, p] : s.prompts) prompts.push_back(issued_to_json(*p));
  nlohmann::json recordings = nlohmann::json::array();
  for (const auto& [id, r] : s.recordings) recordings.push_back(recording_to_json(inv, *r));
  nlohmann::json transcripts = nlohmann::json::object();
  for (const auto& [id, t] : s.transcripts) transcripts[id] = transcript_record_to_json(*t);
  nlohmann::json metrics = nlohmann::json::array();
  for (const auto& m : s.metrics) metrics.push_back(metrics_to_json(m));
  return {{"profile_id", s.profile_id},
          {"config", config_to_json(s.config)},
          {"lexicon", lexicon_to_json(*s.lexicon)},
          {"training_words", s.training->size()},
          {"custom_words", s.custom_words},
          {"templates", templates_to_json(*s.templates)},
          {"model", model_to_json(s.model)},
          {"speaker", s.speaker ? speaker_to_json(*s.speaker) : nlohmann::json(nullptr)},
          {"eval", eval_to_json(inv, *s.eval)},
          {"cold_start", plan_to_json(s.cold_start)},
          {"chunk_recorded", s.chunk_recorded},
          {"plan_cursor", s.plan_cursor},
          {"coverage_cursor", s.coverage_cursor},
          {"prompts", std::move(prompts)},
          {"recordings", std::move(recordings)},
          {"transcripts", std::move(transcripts)},
          {"round", s.round},
          {"corrections_total", s.corrections_total},
          {"corrections_since_round", s.corrections_since_round},
          {"interaction_seconds", s.interaction_seconds},
          {"metrics", std::move(metrics)},
          {"created", s.created},
          {"updated", s.updated},
          {"last_seq", s.last_seq}};
}

ProfileState state_from_json(const nlohmann::json& j) {
  try {
    ProfileState s;
    s.profile_id = j.at("profile_id").get<std::string>();
    s.config = config_from_json(j.at("config"));
    auto lexicon = std::make_shared<const Lexicon>(lexicon_from_json(j.at("lexicon")));
    const auto& inv = lexicon->inventory();
    s.custom_words = j.at("custom_words").get<std::vector<std::string>>();
    s.templates = std::make_shared<const std::vector<SentenceTemplate>>(templates_from_json(j.at("templates")));
    s.model = model_from_json(j.at("model"));
    if (!j.at("speaker").is_null()) s.speaker = speaker_from_json(j.at("speaker"));
    auto eval = std::make_shared<const EvalSet>(eval_from_json(inv, j.at("eval")));
    s.training = std::make_shared<const Lexicon>(training_lexicon(*lexicon, *eval));
    s.eval = std::move(eval);
    s.lexicon = std::move(lexicon);
    s.cold_start = plan_from_json(j.at("cold_start"));
    s.chunk_recorded = j.at("chunk_recorded").get<std::vector<bool>>();
    s.plan_cursor = j.at("plan_cursor").get<std::size_t>();
    s.coverage_cursor = j.at("coverage_cursor").get<std::size_t>();
    for (const auto& p : j.at("prompts")) {
      auto issued = std::make_shared<const IssuedPrompt>(issued_from_json(p, 0));
      s.prompts.emplace(issued->ref, std::move(issued));
    }
    for (const auto& r : j.at("recordings")) {
      auto rec = std::make_shared<const RecordingRecord>(recording_from_json(inv, r));
      s.recordings.emplace(rec->utterance.id, std::move(rec));
    }
    for (const auto& [id, t] : j.at("transcripts").items()) {
      s.transcripts.emplace(id, std::make_shared<const TranscriptRecord>(transcript_record_from_json(t)));
    }
    s.round = j.at("round").get<std::size_t>();
    s.corrections_total = j.at("corrections_total").get<std::size_t>();
    s.corrections_since_round = j.at("corrections_since_round").get<std::size_t>();
    s.interaction_seconds = j.at("interaction_seconds").get<std::uint64_t>();
    for (const auto& m : j.at("metrics")) s.metrics.push_back(metrics_from_json(m));
    s.created = j.at("created").get<std::string>();
    s.updated = j.at("updated").get<std::string>();
    s.last_seq = j.at("last_seq").get<std::uint64_t>();
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kCorruptLog, std::string("snapshot: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kCorruptLog) throw;
    throw Error(ErrorCode::kCorruptLog, std::string("snapshot: ") + e.what());
  }
}

nlohmann::json transcript_view_json(const ProfileState& state, const std::string& utterance_id) {
  const auto it = state.transcripts.find(utterance_id);
  if (it == state.transcripts.end()) throw Error(ErrorCode::kUnknownUtterance, utterance_id);
  const auto& record = *it->second;
  auto j = transcript_to_json(record.transcript);
  for (std::size_t i = 0; i < j["slots"].size(); ++i) {
    auto& slot = j["slots"][i];
    const auto c = record.corrections.find(i);
    slot["corrected"] = c != record.corrections.end();
    if (c != record.corrections.end()) {
      slot["word"] = c->second.chosen_word;
      slot["uncertainty"] = 0.0;
      slot["band"] = band_name(Band::kLow);
      slot.erase("alternatives");
    }
  }
  j["prompt_words"] = state.recordings.at(utterance_id)->utterance.prompt_words;
  j["num_passes"] = record.hypotheses.num_passes;
  return j;
}

double evaluate_wer(const ProfileState& state) {
  if (!state.eval) throw Error(ErrorCode::kBadConfig, "profile has no evaluation set");
  return evaluate_wer(*state.lexicon, state.model, *state.eval);
}

double evaluate_wer(const Lexicon& lexicon, const AdaptiveModel& model, const EvalSet& eval) {
  if (eval.words.empty() || eval.renderings.empty()) {
    throw Error(ErrorCode::kBadConfig, "profile has no evaluation renderings");
  }
  const SlotDecoder decoder(lexicon, model);
  const auto matrix = expected_confusion(model);
  std::map<Pronunciation, std::string> decoded;
  std::size_t errors = 0;
  std::size_t total = 0;
  for (const auto& rendering : eval.renderings) {
    for (std::size_t i = 0; i < rendering.size(); ++i) {
      auto hit = decoded.find(rendering[i]);
      if (hit == decoded.end()) {
        const auto best = decoder.best(rendering[i], matrix);
        hit = decoded.emplace(rendering[i], fold_case(lexicon.entries()[best].word)).first;
      }
      if (hit->second != fold_case(eval.words[i])) ++errors;
      ++total;
    }
  }
  return static_cast<double>(errors) / static_cast<double>(total);
}

}  // namespace phonoloop
