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

#include "phonoloop/session/events.hpp"

#include <array>
#include <utility>

#include "phonoloop/error.hpp"

namespace phonoloop {

namespace {

constexpr std::array<std::pair<EventKind, std::string_view>, 8> kNames{{
    {EventKind::kProfileCreated, "ProfileCreated"},
    {EventKind::kPromptIssued, "PromptIssued"},
    {EventKind::kRecordingAccepted, "RecordingAccepted"},
    {EventKind::kRecordingRejected, "RecordingRejected"},
    {EventKind::kTranscriptIssued, "TranscriptIssued"},
    {EventKind::kCorrectionApplied, "CorrectionApplied"},
    {EventKind::kAdaptationRound, "AdaptationRound"},
    {EventKind::kAcousticReset, "AcousticReset"},
}};

}  // namespace

std::string_view event_kind_name(EventKind kind) {
  for (const auto& [k, name] : kNames) {
    if (k == kind) return name;
  }
  return "Unknown";
}

EventKind event_kind_from_name(std::string_view name) {
  for (const auto& [k, n] : kNames) {
    if (n == name) return k;
  }
  throw Error(ErrorCode::kParseError, "unknown event kind '" + std::string(name) + "'");
}

nlohmann::json event_to_json(const SessionEvent& event) {
  return {{"seq", event.seq},
          {"kind", event_kind_name(event.kind)},
          {"timestamp", event.timestamp},
          {"payload", event.payload}};
}

SessionEvent event_from_json(const nlohmann::json& j) {
  try {
    SessionEvent event;
    event.seq = j.at("seq").get<std::uint64_t>();
    event.kind = event_kind_from_name(j.at("kind").get<std::string>());
    event.timestamp = j.at("timestamp").get<std::string>();
    event.payload = j.at("payload");
    return event;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("event: ") + e.what());
  }
}

}  // namespace phonoloop
