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

#include "phonoloop/error.hpp"

namespace phonoloop {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnknownWord: return "UnknownWord";
    case ErrorCode::kEmptyUniverse: return "EmptyUniverse";
    case ErrorCode::kEmptyReference: return "EmptyReference";
    case ErrorCode::kTransport: return "Transport";
    case ErrorCode::kProtocolViolation: return "ProtocolViolation";
    case ErrorCode::kTimeout: return "Timeout";
    case ErrorCode::kTooShort: return "TooShort";
    case ErrorCode::kUnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::kNoFillableTemplate: return "NoFillableTemplate";
    case ErrorCode::kColdStartIncomplete: return "ColdStartIncomplete";
    case ErrorCode::kBadConfig: return "BadConfig";
    case ErrorCode::kBadSpec: return "BadSpec";
    case ErrorCode::kUnknownProfile: return "UnknownProfile";
    case ErrorCode::kUnknownPrompt: return "UnknownPrompt";
    case ErrorCode::kUnknownUtterance: return "UnknownUtterance";
    case ErrorCode::kUnknownSlot: return "UnknownSlot";
    case ErrorCode::kGateRejected: return "GateRejected";
    case ErrorCode::kAlternativeMismatch: return "AlternativeMismatch";
    case ErrorCode::kSlotAlreadyCorrected: return "SlotAlreadyCorrected";
    case ErrorCode::kNothingToAdapt: return "NothingToAdapt";
    case ErrorCode::kCorruptLog: return "CorruptLog";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace phonoloop
