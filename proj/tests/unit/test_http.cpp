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

#include <doctest.h>

#include "phonoloop/session/http_api.hpp"
#include "session_driver.hpp"
#include "support.hpp"

using namespace phonoloop;
using namespace phonoloop::testing;

namespace {

struct Harness {
  explicit Harness(ServerConfig config = {}) : api(engine, std::move(config)), server([this](httplib::Server& s) {
    api.register_routes(s);
  }), client("127.0.0.1", server.port()) {}

  nlohmann::json post(const std::string& path, const nlohmann::json& body, int expect) {
    auto res = client.Post(path, body.dump(), "application/json");
    REQUIRE(res);
    CHECK(res->status == expect);
    return nlohmann::json::parse(res->body);
  }
  nlohmann::json get(const std::string& path, int expect) {
    auto res = client.Get(path);
    REQUIRE(res);
    CHECK(res->status == expect);
    return nlohmann::json::parse(res->body);
  }
  httplib::Result upload(const std::string& path, const std::string& wav, const std::string& prompt_ref) {
    httplib::MultipartFormDataItems items{{"audio", wav, "clip.wav", "audio/wav"},
                                          {"prompt_ref", prompt_ref, "", ""}};
    return client.Post(path, items);
  }

  SessionEngine engine;
  HttpApi api;
  LocalServer server;
  httplib::Client client;
};

nlohmann::json toy_profile_body(std::uint64_t seed) {
  return {{"lexicon", kToyLexicon},
          {"templates", {"the <noun> sees the <noun>"}},
          {"mode", "simulated"},
          {"speaker_spec", {{"n_difficult", 3}, {"severity", 0.7}, {"seed", seed}}},
          {"seed", seed},
          {"eval_words", 4},
          {"cold_start_budget", 20}};
}

}  // namespace

TEST_CASE("service endpoints") {
  Harness h;
  CHECK(h.get("/health", 200) == nlohmann::json{{"status", "ok"}});
  CHECK(h.get("/gate-constants", 200) == gate_constants_json());
}

TEST_CASE("full simulated session over HTTP") {
  Harness h;
  const auto created = h.post("/profiles", toy_profile_body(3), 201);
  const std::string pid = created.at("profile_id");
  CHECK(created.at("mode") == "simulated");
  CHECK(created.at("acoustic_prior") == true);
  CHECK(h.get("/profiles/" + pid, 200).at("last_seq") == 1);

  const auto prompts = h.get("/profiles/" + pid + "/prompts?n=2", 200);
  REQUIRE(prompts.at("prompts").size() >= 1);
  const std::string ref = prompts.at("prompts").at(0).at("prompt_ref");
  CHECK(prompts.at("prompts").at(0).at("words") == h.engine.profile(pid)->cold_start.prompts.at(0).words);
  CHECK(h.get("/profiles/" + pid + "/prompts?n=0", 200).at("prompts").empty());
  CHECK(h.get("/profiles/" + pid + "/prompts?n=-1", 400).at("error") == "BadConfig");
  CHECK(h.get("/profiles/" + pid + "/prompts?n=abc", 400).at("error") == "BadConfig");

  const auto rec = h.post("/profiles/" + pid + "/recordings", {{"simulate", true}, {"prompt_ref", ref}}, 201);
  const std::string uid = rec.at("utterance_id");
  CHECK(h.post("/profiles/" + pid + "/recordings", {{"simulate", true}, {"prompt_ref", "nope"}}, 404).at("error") ==
        "UnknownPrompt");
  CHECK(h.post("/profiles/" + pid + "/recordings", {{"prompt_ref", ref}}, 400).at("error") == "BadConfig");

  auto res = h.upload("/profiles/" + pid + "/recordings", tone_wav(), ref);
  REQUIRE(res);
  CHECK(res->status == 201);
  CHECK(nlohmann::json::parse(res->body).at("snr").at("accepted") == true);

  res = h.upload("/profiles/" + pid + "/recordings", flat_wav(), ref);
  REQUIRE(res);
  CHECK(res->status == 422);
  auto err = nlohmann::json::parse(res->body);
  CHECK(err.at("error") == "GateRejected");
  CHECK(err.at("detail").at("snr_db") == 0.0);

  std::string float_wav = tone_wav();
  float_wav[20] = 3;
  res = h.upload("/profiles/" + pid + "/recordings", float_wav, ref);
  REQUIRE(res);
  CHECK(res->status == 415);
  CHECK(nlohmann::json::parse(res->body).at("error") == "UnsupportedFormat");

  const auto transcript = h.post("/profiles/" + pid + "/transcribe", {{"utterance_id", uid}}, 200);
  CHECK(transcript.at("utterance_id") == uid);
  CHECK(transcript.at("num_passes") == 10);
  const auto& slots = transcript.at("slots");
  REQUIRE(slots.size() == transcript.at("prompt_words").size());
  for (const auto& s : slots) {
    if (s.at("band") == "high") CHECK_FALSE(s.at("alternatives").empty());
  }
  CHECK(h.get("/profiles/" + pid + "/transcripts/" + uid, 200) == transcript);
  CHECK(h.post("/profiles/" + pid + "/transcribe", {{"utterance_id", "u999"}}, 404).at("error") ==
        "UnknownUtterance");
  CHECK(h.get("/profiles/" + pid + "/transcripts/u999", 404).at("error") == "UnknownUtterance");

  CHECK(h.post("/profiles/" + pid + "/adapt", nlohmann::json::object(), 409).at("error") == "NothingToAdapt");

  const std::string word = slots.at(0).at("word");
  const nlohmann::json confirm = {{"utterance_id", uid}, {"slot_index", 0}, {"chosen_word", word}, {"source", "topk"}};
  auto ack = h.post("/profiles/" + pid + "/corrections", confirm, 200);
  CHECK(ack.at("applied") == true);
  CHECK(ack.at("transcript").at("slots").at(0).at("corrected") == true);
  CHECK(h.post("/profiles/" + pid + "/corrections", confirm, 200).at("applied") == false);
  auto conflicting = confirm;
  conflicting["chosen_word"] = word == "bab" ? "bob" : "bab";
  conflicting["source"] = "manual";
  CHECK(h.post("/profiles/" + pid + "/corrections", conflicting, 409).at("error") == "SlotAlreadyCorrected");
  CHECK(h.post("/profiles/" + pid + "/corrections",
               {{"utterance_id", uid}, {"slot_index", 1}, {"chosen_word", "zeppelin"}, {"source", "topk"}}, 422)
            .at("error") == "AlternativeMismatch");
  CHECK(h.post("/profiles/" + pid + "/corrections",
               {{"utterance_id", uid}, {"slot_index", 9}, {"chosen_word", "bab"}, {"source", "topk"}}, 404)
            .at("error") == "UnknownSlot");
  CHECK(h.post("/profiles/" + pid + "/corrections", {{"utterance_id", uid}}, 400).at("error") == "BadConfig");
  ack = h.post("/profiles/" + pid + "/corrections",
               {{"utterance_id", uid}, {"slot_index", 1}, {"chosen_word", "Zeppelin"}, {"source", "manual"},
                {"pronunciation", "b o t"}},
               200);
  CHECK(ack.at("added_to_lexicon") == true);

  const auto round = h.post("/profiles/" + pid + "/adapt", nlohmann::json::object(), 200);
  CHECK(round.at("round") == 1);
  CHECK(round.at("n_corrections") == 2);
  const auto metrics = h.get("/profiles/" + pid + "/metrics", 200);
  CHECK(metrics.at("metrics").size() == 2);

  const auto difficulty = h.get("/profiles/" + pid + "/difficulty", 200);
  const auto& rows = difficulty.at("rows");
  CHECK(rows.size() == h.engine.profile(pid)->lexicon->inventory().size());
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i - 1].at("phd_score") >= rows[i].at("phd_score"));
  auto csv = h.client.Get("/profiles/" + pid + "/difficulty?format=csv");
  REQUIRE(csv);
  CHECK(csv->status == 200);
  CHECK(csv->body.rfind("phoneme,error_rate,epistemic_mi,phd_score\n", 0) == 0);

  const auto reset = h.post("/profiles/" + pid + "/reset-acoustic", nlohmann::json::object(), 200);
  CHECK(reset.at("acoustic_prior") == true);
  CHECK(reset.at("plan_cursor") == 0);
  CHECK(reset.at("custom_words") == nlohmann::json{"Zeppelin"});
  CHECK(h.get("/profiles/" + pid + "/metrics", 200).at("metrics").size() == 2);
}

TEST_CASE("profile creation errors and file references") {
  ServerConfig config;
  config.data_dir = source_dir() / "fixtures/standard";
  Harness h(config);
  CHECK(h.get("/profiles/ghost", 404).at("error") == "UnknownProfile");
  CHECK(h.post("/profiles/ghost/adapt", nlohmann::json::object(), 404).at("error") == "UnknownProfile");

  auto res = h.client.Post("/profiles", "{not json", "application/json");
  REQUIRE(res);
  CHECK(res->status == 400);
  CHECK(nlohmann::json::parse(res->body).at("error") == "ParseError");

  CHECK(h.post("/profiles", {{"mode", "simulated"}}, 400).at("error") == "BadConfig");
  auto no_speaker = toy_profile_body(1);
  no_speaker.erase("speaker_spec");
  CHECK(h.post("/profiles", no_speaker, 400).at("error") == "BadConfig");
  auto external = toy_profile_body(1);
  external["mode"] = "external";
  CHECK(h.post("/profiles", external, 400).at("error") == "BadConfig");
  auto bad_template = toy_profile_body(1);
  bad_template["templates"] = {"too short"};
  CHECK(h.post("/profiles", bad_template, 400).at("error") == "BadConfig");

  const auto created = h.post("/profiles",
                              {{"lexicon_ref", "lexicon.tsv"},
                               {"inventory_ref", "inventory.txt"},
                               {"templates_ref", "templates.txt"},
                               {"speaker_spec", {{"n_difficult", 5}, {"severity", 0.8}, {"seed", 4}}},
                               {"seed", 4},
                               {"cold_start_budget", 8}},
                              201);
  CHECK(created.at("lexicon_size") == 200);
  CHECK(created.at("eval_words") == 100);
  CHECK(h.post("/profiles", {{"lexicon_ref", "missing.tsv"}}, 400).at("error") == "BadConfig");
}

TEST_CASE("external recognizer over HTTP") {
  nlohmann::json reply;
  std::string seen_ref;
  LocalServer recognizer([&](httplib::Server& s) {
    s.Post("/recognize", [&](const httplib::Request& req, httplib::Response& res) {
      const auto body = nlohmann::json::parse(req.body);
      seen_ref = body.at("audio_ref");
      CHECK(body.at("num_passes") == 4);
      res.set_content(reply.dump(), "application/json");
    });
  });
  ServerConfig config;
  config.recognizer_endpoint = recognizer.url("/recognize");
  Harness h(config);
  auto body = toy_profile_body(2);
  body["mode"] = "external";
  body.erase("speaker_spec");
  body["passes"] = 4;
  const std::string pid = h.post("/profiles", body, 201).at("profile_id");
  const std::string ref = h.get("/profiles/" + pid + "/prompts?n=1", 200).at("prompts").at(0).at("prompt_ref");
  auto res = h.upload("/profiles/" + pid + "/recordings", tone_wav(), ref);
  REQUIRE(res);
  REQUIRE(res->status == 201);
  const std::string uid = nlohmann::json::parse(res->body).at("utterance_id");

  const nlohmann::json hyp_a = {{"words", {"the", "pelican"}}, {"slot_phonemes", {{"dh", "ax"}, {"p", "e", "l"}}}};
  const nlohmann::json hyp_b = {{"words", {"the", "pop"}}, {"slot_phonemes", {{"dh", "ax"}, {"p", "o", "p"}}}};
  reply = {{"slots", 2}, {"hypotheses", {hyp_a, hyp_b, hyp_a, hyp_b}}, {"coherent_index", 0}};
  const auto t = h.post("/profiles/" + pid + "/transcribe", {{"utterance_id", uid}}, 200);
  CHECK(seen_ref == "mem:" + pid + "/" + uid);
  CHECK(h.engine.audio_bytes(pid, seen_ref) == tone_wav());
  CHECK(t.at("slots").at(0).at("band") == "low");
  CHECK(t.at("slots").at(1).at("band") == "high");
  CHECK(t.at("slots").at(1).at("alternatives").at(0) == "pelican");

  reply = {{"slots", 3}, {"hypotheses", {hyp_a}}, {"coherent_index", 0}};
  CHECK(h.post("/profiles/" + pid + "/transcribe", {{"utterance_id", uid}}, 502).at("error") == "ProtocolViolation");
  reply = {{"slots", 2}, {"hypotheses", {{{"words", {"the", "x"}}, {"slot_phonemes", {{"dh"}, {"qq"}}}}}},
           {"coherent_index", 0}};
  CHECK(h.post("/profiles/" + pid + "/transcribe", {{"utterance_id", uid}}, 502).at("error") == "ProtocolViolation");
}

TEST_CASE("status code mapping") {
  CHECK(http_status_for(ErrorCode::kUnknownProfile) == 404);
  CHECK(http_status_for(ErrorCode::kNothingToAdapt) == 409);
  CHECK(http_status_for(ErrorCode::kGateRejected) == 422);
  CHECK(http_status_for(ErrorCode::kUnsupportedFormat) == 415);
  CHECK(http_status_for(ErrorCode::kTransport) == 502);
  CHECK(http_status_for(ErrorCode::kTimeout) == 504);
  CHECK(http_status_for(ErrorCode::kBadConfig) == 400);
  CHECK(http_status_for(ErrorCode::kCorruptLog) == 500);
}
