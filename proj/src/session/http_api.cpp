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

#include "phonoloop/session/http_api.hpp"

#include <sstream>

#include <httplib.h>

namespace phonoloop {

namespace {

void send_json(httplib::Response& res, int status, const nlohmann::json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, ErrorCode code, const nlohmann::json& detail) {
  send_json(res, http_status_for(code), {{"error", error_code_name(code)}, {"detail", detail}});
}

nlohmann::json parse_body(const httplib::Request& req) {
  if (req.body.empty()) return nlohmann::json::object();
  try {
    return nlohmann::json::parse(req.body);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("request body: ") + e.what());
  }
}

template <class Fn>
httplib::Server::Handler guarded(Fn fn) {
  return [fn](const httplib::Request& req, httplib::Response& res) {
    try {
      fn(req, res);
    } catch (const Error& e) {
      send_error(res, e.code(), e.detail());
    } catch (const nlohmann::json::exception& e) {
      send_error(res, ErrorCode::kBadConfig, e.what());
    } catch (const std::exception& e) {
      send_json(res, 500, {{"error", "Internal"}, {"detail", e.what()}});
    }
  };
}

std::string fmt_words(const std::vector<std::string>& words) {
  std::string out;
  for (const auto& w : words) {
    if (!out.empty()) out += ' ';
    out += w;
  }
  return out;
}

std::string profile_id_of(const httplib::Request& req) { return req.matches[1]; }

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& ref) {
  const std::filesystem::path p(ref);
  return p.is_absolute() ? p : base / p;
}

}  // namespace

int http_status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnknownProfile:
    case ErrorCode::kUnknownPrompt:
    case ErrorCode::kUnknownUtterance:
    case ErrorCode::kUnknownSlot:
      return 404;
    case ErrorCode::kSlotAlreadyCorrected:
    case ErrorCode::kNothingToAdapt:
    case ErrorCode::kColdStartIncomplete:
      return 409;
    case ErrorCode::kGateRejected:
    case ErrorCode::kAlternativeMismatch:
    case ErrorCode::kTooShort:
    case ErrorCode::kNoFillableTemplate:
    case ErrorCode::kUnknownWord:
      return 422;
    case ErrorCode::kUnsupportedFormat:
      return 415;
    case ErrorCode::kTransport:
    case ErrorCode::kProtocolViolation:
      return 502;
    case ErrorCode::kTimeout:
      return 504;
    case ErrorCode::kCorruptLog:
    case ErrorCode::kIoError:
      return 500;
    default:
      return 400;
  }
}

nlohmann::json profile_summary_json(const ProfileState& s) {
  return {{"profile_id", s.profile_id},
          {"mode", mode_name(s.config.mode)},
          {"strategy", strategy_name(s.config.strategy)},
          {"seed", s.config.seed},
          {"lexicon_size", s.lexicon->size()},
          {"custom_words", s.custom_words},
          {"plan_cursor", s.plan_cursor},
          {"plan_length", s.cold_start.prompts.size()},
          {"cold_start_complete", s.cold_start_complete()},
          {"round", s.round},
          {"recordings", s.recordings.size()},
          {"corrections", s.corrections_total},
          {"corrections_since_round", s.corrections_since_round},
          {"minutes_interaction", s.minutes_interaction()},
          {"eval_words", s.eval ? s.eval->words.size() : 0},
          {"acoustic_prior", s.model.is_prior()},
          {"created", s.created},
          {"updated", s.updated},
          {"last_seq", s.last_seq}};
}

HttpApi::HttpApi(SessionEngine& engine, ServerConfig config) : engine_(engine), config_(std::move(config)) {}

ProfileRequest HttpApi::profile_request_from_json(const nlohmann::json& body) const {
  if (!body.is_object()) throw Error(ErrorCode::kBadConfig, "profile request must be an object");
  ProfileRequest r;
  try {
    if (body.contains("lexicon")) {
      std::istringstream in(body.at("lexicon").get<std::string>());
      r.lexicon = Lexicon::parse(in);
    } else if (body.contains("lexicon_ref")) {
      std::optional<std::filesystem::path> inventory;
      if (body.contains("inventory_ref")) {
        inventory = resolve(config_.data_dir, body.at("inventory_ref").get<std::string>());
      }
      r.lexicon = Lexicon::load(resolve(config_.data_dir, body.at("lexicon_ref").get<std::string>()), inventory);
    } else {
      throw Error(ErrorCode::kBadConfig, "lexicon or lexicon_ref is required");
    }
    if (body.contains("templates")) {
      for (const auto& t : body.at("templates")) r.templates.push_back(SentenceTemplate::parse(t.get<std::string>()));
    } else if (body.contains("templates_ref")) {
      r.templates = load_templates(resolve(config_.data_dir, body.at("templates_ref").get<std::string>()));
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kBadConfig) throw;
    throw Error(ErrorCode::kBadConfig, e.what());
  }
  auto config_json = body;
  if (!config_json.contains("gate_threshold_db")) config_json["gate_threshold_db"] = config_.gate_threshold_db;
  if (!config_json.contains("recognizer_endpoint") && !config_.recognizer_endpoint.empty()) {
    config_json["recognizer_endpoint"] = config_.recognizer_endpoint;
  }
  for (const char* key : {"lexicon", "templates", "inventory_ref", "templates_ref"}) config_json.erase(key);
  r.config = config_from_json(config_json);
  return r;
}

void HttpApi::register_routes(httplib::Server& server) {
  server.Get("/health", [](const httplib::Request&, httplib::Response& res) {
    send_json(res, 200, {{"status", "ok"}});
  });
  server.Get("/gate-constants", [](const httplib::Request&, httplib::Response& res) {
    send_json(res, 200, gate_constants_json());
  });

  server.Post("/profiles", guarded([this](const httplib::Request& req, httplib::Response& res) {
    const auto id = engine_.create_profile(profile_request_from_json(parse_body(req)));
    send_json(res, 201, profile_summary_json(*engine_.profile(id)));
  }));

  server.Get(R"(/profiles/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
    send_json(res, 200, profile_summary_json(*engine_.profile(profile_id_of(req))));
  }));

  server.Get(R"(/profiles/([^/]+)/prompts)", guarded([this](const httplib::Request& req, httplib::Response& res) {
    std::size_t n = 1;
    if (req.has_param("n")) {
      try {
        const long long v = std::stoll(req.get_param_value("n"));
        if (v < 0) throw std::invalid_argument("negative");
        n = static_cast<std::size_t>(v);
      } catch (const std::logic_error&) {
        throw Error(ErrorCode::kBadConfig, "n must be a non-negative integer");
      }
    }
    const auto issued = engine_.next_prompts(profile_id_of(req), n);
    nlohmann::json prompts = nlohmann::json::array();
    for (std::size_t i = 0; i < issued.plan.prompts.size(); ++i) {
      const auto& p = issued.plan.prompts[i];
      prompts.push_back({{"prompt_ref", issued.prompt_refs[i]},
                         {"words", p.words},
                         {"text", fmt_words(p.words)},
                         {"target_phonemes", p.target_phonemes}});
    }
    send_json(res, 200, {{"round", issued.plan.round}, {"prompts", std::move(prompts)}});
  }));

  server.Post(R"(/profiles/([^/]+)/recordings)",
              guarded([this](const httplib::Request& req, httplib::Response& res) {
                RecordingPayload payload;
                std::string prompt_ref;
                if (req.is_multipart_form_data()) {
                  if (!req.has_file("audio")) throw Error(ErrorCode::kBadConfig, "multipart field 'audio' missing");
                  payload.wav = req.get_file_value("audio").content;
                  if (req.has_file("prompt_ref")) prompt_ref = req.get_file_value("prompt_ref").content;
                  if (req.has_param("prompt_ref")) prompt_ref = req.get_param_value("prompt_ref");
                } else {
                  const auto body = parse_body(req);
                  payload.simulate = body.value("simulate", false);
                  prompt_ref = body.value("prompt_ref", std::string());
                  if (!payload.simulate) throw Error(ErrorCode::kBadConfig, "send multipart audio or simulate=true");
                }
                if (prompt_ref.empty()) throw Error(ErrorCode::kUnknownPrompt, "prompt_ref missing");
                const auto outcome = engine_.submit_recording(profile_id_of(req), prompt_ref, payload);
                if (!outcome.accepted) {
                  send_error(res, ErrorCode::kGateRejected, snr_report_to_json(*outcome.snr));
                  return;
                }
                nlohmann::json body = {{"utterance_id", outcome.utterance_id}};
                if (outcome.snr) body["snr"] = snr_report_to_json(*outcome.snr);
                send_json(res, 201, body);
              }));

  server.Post(R"(/profiles/([^/]+)/transcribe)", guarded([this](const httplib::Request& req, httplib::Response& res) {
    const auto body = parse_body(req);
    const auto id = profile_id_of(req);
    const auto uid = body.value("utterance_id", std::string());
    engine_.transcribe(id, uid);
    send_json(res, 200, transcript_view_json(*engine_.profile(id), uid));
  }));

  server.Get(R"(/profiles/([^/]+)/transcripts/([^/]+))",
             guarded([this](const httplib::Request& req, httplib::Response& res) {
               send_json(res, 200, transcript_view_json(*engine_.profile(profile_id_of(req)), req.matches[2]));
             }));

  server.Post(R"(/profiles/([^/]+)/corrections)", guarded([this](const httplib::Request& req, httplib::Response& res) {
    const auto id = profile_id_of(req);
    auto correction = correction_from_json(parse_body(req));
    const auto uid = correction.utterance_id;
    const auto ack = engine_.apply_correction(id, std::move(correction));
    send_json(res, 200,
              {{"applied", ack.applied},
               {"seq", ack.seq},
               {"added_to_lexicon", ack.added_to_lexicon},
               {"transcript", transcript_view_json(*engine_.profile(id), uid)}});
  }));

  server.Post(R"(/profiles/([^/]+)/adapt)", guarded([this](const httplib::Request& req, httplib::Response& res) {
    send_json(res, 200, metrics_to_json(engine_.run_adaptation_round(profile_id_of(req))));
  }));

  server.Get(R"(/profiles/([^/]+)/metrics)", guarded([this](const httplib::Request& req, httplib::Response& res) {
    const auto state = engine_.profile(profile_id_of(req));
    nlohmann::json metrics = nlohmann::json::array();
    for (const auto& m : state->metrics) metrics.push_back(metrics_to_json(m));
    send_json(res, 200, {{"profile_id", state->profile_id}, {"metrics", std::move(metrics)}});
  }));

  server.Get(R"(/profiles/([^/]+)/difficulty)", guarded([this](const httplib::Request& req, httplib::Response& res) {
    const auto state = engine_.profile(profile_id_of(req));
    const auto difficulty = phoneme_difficulty_score(state->model, state->config.difficulty_lambda);
    if (req.has_param("format") && req.get_param_value("format") == "csv") {
      res.set_content(difficulty_csv(difficulty), "text/csv");
      return;
    }
    nlohmann::json rows = nlohmann::json::array();
    for (auto p : difficulty.ranked()) {
      const auto& row = difficulty.rows[p.index()];
      rows.push_back({{"phoneme", row.phoneme},
                      {"error_rate", row.error_rate},
                      {"epistemic_mi", row.epistemic_mi},
                      {"phd_score", row.phd_score}});
    }
    send_json(res, 200, {{"profile_id", state->profile_id}, {"rows", std::move(rows)}});
  }));

  server.Post(R"(/profiles/([^/]+)/reset-acoustic)",
              guarded([this](const httplib::Request& req, httplib::Response& res) {
                send_json(res, 200, profile_summary_json(*engine_.reset_acoustic_baseline(profile_id_of(req))));
              }));
}

}  // namespace phonoloop
