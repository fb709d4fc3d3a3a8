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
#include <fstream>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "phonoloop/session/events.hpp"
#include "phonoloop/session/profile_state.hpp"

namespace phonoloop {

inline constexpr std::size_t kDefaultSnapshotInterval = 100;

// <root>/<profile_id>/events.jsonl plus snapshot.json every `interval`
// events.
class EventStore {
 public:
  EventStore(std::filesystem::path root, std::string profile_id,
             std::size_t snapshot_interval = kDefaultSnapshotInterval);

  // Appends one line and flushes; writes a snapshot of `after` when the
  // event's seq is a multiple of the interval. Throws IoError.
  void append(const SessionEvent& event, const ProfileState& after);

  const std::filesystem::path& directory() const noexcept { return dir_; }

 private:
  std::filesystem::path dir_;
  std::size_t interval_;
  std::ofstream log_;
};

std::filesystem::path event_log_path(const std::filesystem::path& root, const std::string& profile_id);
std::filesystem::path snapshot_path(const std::filesystem::path& root, const std::string& profile_id);

// Every line must parse and seqs must run 1, 2, 3, ...; a final line
// without its newline counts as truncated. Throws CorruptLog or IoError.
std::vector<SessionEvent> read_event_log(const std::filesystem::path& path);

ProfileState replay(std::span<const SessionEvent> events, ProfileState start = {});

// Snapshot plus tail replay, or full replay when `use_snapshot` is false
// or no snapshot exists. Throws UnknownProfile, CorruptLog.
ProfileState load_profile(const std::filesystem::path& root, const std::string& profile_id,
                          bool use_snapshot = true);

std::vector<std::string> list_profiles(const std::filesystem::path& root);

}  // namespace phonoloop
