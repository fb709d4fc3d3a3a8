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

#include "phonoloop/recognizer/external.hpp"

#include <httplib.h>

#include "phonoloop/error.hpp"

namespace phonoloop {

Endpoint split_endpoint(const std::string& url) {
  const auto scheme = url.find("://");
  if (scheme == std::string::npos) throw Error(ErrorCode::kBadConfig, "endpoint needs a scheme: " + url);
  const auto slash = url.find('/', scheme + 3);
  if (slash == std::string::npos) return {url, "/"};
  return {url.substr(0, slash), url.substr(slash)};
}

nlohmann::json make_recognizer_request(const std::string& audio_ref, std::size_t num_passes) {
  return {{"audio_ref", audio_ref}, {"num_passes", num_passes}};
}

namespace {

bool is_count(const nlohmann::json& v) { return v.is_number_integer() && v.get<std::int64_t>() >= 0; }

}  // namespace

HypothesisSet parse_recognizer_response(const nlohmann::json& body) {
  auto violation = [](const std::string& what) { return Error(ErrorCode::kProtocolViolation, what); };
  if (!body.is_object()) throw violation("response is not a JSON object");
  if (!body.contains("slots") || !is_count(body["slots"])) throw violation("missing or bad 'slots'");
  if (!body.contains("hypotheses") || !body["hypotheses"].is_array() || body["hypotheses"].empty()) {
    throw violation("missing or empty 'hypotheses'");
  }
  if (!body.contains("coherent_index") || !is_count(body["coherent_index"])) {
    throw violation("missing or bad 'coherent_index'");
  }
  const auto slots = body["slots"].get<std::size_t>();
  HypothesisSet set;
  for (const auto& h : body["hypotheses"]) {
    if (!h.is_object() || !h.contains("words") || !h["words"].is_array()) throw violation("hypothesis without 'words'");
    if (!h.contains("slot_phonemes") || !h["slot_phonemes"].is_array()) {
      throw violation("hypothesis without 'slot_phonemes'");
    }
    if (h["words"].size() != slots || h["slot_phonemes"].size() != slots) {
      throw violation("hypothesis slot count differs from 'slots'");
    }
    Hypothesis hyp;
    for (const auto& w : h["words"]) {
      if (!w.is_string()) throw violation("non-string word");
      hyp.words.push_back(w.get<std::string>());
    }
    for (const auto& slot : h["slot_phonemes"]) {
      if (!slot.is_array()) throw violation("slot_phonemes entry is not an array");
      std::vector<std::string> phones;
      for (const auto& ph : slot) {
        if (!ph.is_string()) throw violation("non-string phoneme");
        phones.push_back(ph.get<std::string>());
      }
      hyp.slot_phonemes.push_back(std::move(phones));
    }
    set.hypotheses.push_back(std::move(hyp));
  }
  set.coherent_index = body["coherent_index"].get<std::size_t>();
  if (set.coherent_index >= set.hypotheses.size()) throw violation("coherent_index out of range");
  set.num_passes = set.hypotheses.size();
  return set;
}

HttpRecognizerClient::HttpRecognizerClient(std::string endpoint, std::chrono::milliseconds timeout)
    : endpoint_(std::move(endpoint)), timeout_(timeout) {}

HypothesisSet HttpRecognizerClient::recognize(const std::string& audio_ref, std::size_t num_passes) {
  const auto ep = split_endpoint(endpoint_);
  httplib::Client client(ep.origin);
  client.set_connection_timeout(timeout_);
  client.set_read_timeout(timeout_);
  client.set_write_timeout(timeout_);
  const auto started = std::chrono::steady_clock::now();
  auto res = client.Post(ep.path, make_recognizer_request(audio_ref, num_passes).dump(), "application/json");
  if (!res) {
    const auto err = res.error();
    const bool timed_out = err == httplib::Error::ConnectionTimeout ||
                           std::chrono::steady_clock::now() - started >= timeout_;
    throw Error(timed_out ? ErrorCode::kTimeout : ErrorCode::kTransport,
                endpoint_ + ": " + httplib::to_string(err));
  }
  if (res->status != 200) {
    throw Error(ErrorCode::kTransport, endpoint_ + ": HTTP " + std::to_string(res->status));
  }
  nlohmann::json body;
  try {
    body = nlohmann::json::parse(res->body);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kProtocolViolation, std::string("malformed JSON: ") + e.what());
  }
  return parse_recognizer_response(body);
}

HypothesisSet external_recognize(const std::string& endpoint, const std::string& audio_ref,
                                 std::size_t num_passes, std::chrono::milliseconds timeout) {
  return HttpRecognizerClient(endpoint, timeout).recognize(audio_ref, num_passes);
}

}  // namespace phonoloop
