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

#include <chrono>
#include <string>

#include <json.hpp>

#include "phonoloop/recognizer/decoder.hpp"

namespace phonoloop {

// A remote recognizer that returns slot-aligned hypotheses for stored audio.
class ExternalRecognizer {
 public:
  virtual ~ExternalRecognizer() = default;
  virtual HypothesisSet recognize(const std::string& audio_ref, std::size_t num_passes) = 0;
};

// Request: {"audio_ref": str, "num_passes": int}. Response: {"slots": int,
// "hypotheses": [{"words": [str], "slot_phonemes": [[str]]}],
// "coherent_index": int}.
nlohmann::json make_recognizer_request(const std::string& audio_ref, std::size_t num_passes);
// Throws ProtocolViolation on any schema mismatch.
HypothesisSet parse_recognizer_response(const nlohmann::json& body);

class HttpRecognizerClient final : public ExternalRecognizer {
 public:
  explicit HttpRecognizerClient(std::string endpoint,
                                std::chrono::milliseconds timeout = std::chrono::seconds(10));

  // Throws Transport, Timeout or ProtocolViolation.
  HypothesisSet recognize(const std::string& audio_ref, std::size_t num_passes) override;

 private:
  std::string endpoint_;
  std::chrono::milliseconds timeout_;
};

HypothesisSet external_recognize(const std::string& endpoint, const std::string& audio_ref,
                                 std::size_t num_passes,
                                 std::chrono::milliseconds timeout = std::chrono::seconds(10));

// Splits "http://host:port/path" into the scheme/host/port part and the path.
struct Endpoint {
  std::string origin;
  std::string path;
};
Endpoint split_endpoint(const std::string& url);

}  // namespace phonoloop
