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
#include <string>
#include <string_view>

#include <json.hpp>

namespace phonoloop {

enum class EventKind {
  kProfileCreated,
  kPromptIssued,
  kRecordingAccepted,
  kRecordingRejected,
  kTranscriptIssued,
  kCorrectionApplied,
  kAdaptationRound,
  kAcousticReset,
};

std::string_view event_kind_name(EventKind kind);
EventKind event_kind_from_name(std::string_view name);

// Payloads carry every computed result, so applying an event never draws
// random numbers or decodes.
struct SessionEvent {
  std::uint64_t seq = 0;
  EventKind kind = EventKind::kProfileCreated;
  std::string timestamp;
  nlohmann::json payload = nlohmann::json::object();

  bool operator==(const SessionEvent&) const = default;
};

// {seq, kind, timestamp, payload}; throws ParseError.
nlohmann::json event_to_json(const SessionEvent& event);
SessionEvent event_from_json(const nlohmann::json& j);

}  // namespace phonoloop
