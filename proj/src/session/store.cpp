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

#include "phonoloop/session/store.hpp"

#include <algorithm>
#include <iterator>
#include <sstream>

#include "phonoloop/error.hpp"

namespace phonoloop {

namespace fs = std::filesystem;

std::filesystem::path event_log_path(const fs::path& root, const std::string& profile_id) {
  return root / profile_id / "events.jsonl";
}

std::filesystem::path snapshot_path(const fs::path& root, const std::string& profile_id) {
  return root / profile_id / "snapshot.json";
}

EventStore::EventStore(fs::path root, std::string profile_id, std::size_t snapshot_interval)
    : dir_(root / profile_id), interval_(snapshot_interval) {
  std::error_code ec;
  fs::create_directories(dir_, ec);
  if (ec) throw Error(ErrorCode::kIoError, "cannot create " + dir_.string() + ": " + ec.message());
  log_.open(dir_ / "events.jsonl", std::ios::app | std::ios::binary);
  if (!log_) throw Error(ErrorCode::kIoError, "cannot open event log in " + dir_.string());
}

void EventStore::append(const SessionEvent& event, const ProfileState& after) {
  log_ << event_to_json(event).dump() << '\n';
  log_.flush();
  if (!log_) throw Error(ErrorCode::kIoError, "write failed in " + dir_.string());
  if (interval_ == 0 || event.seq % interval_ != 0) return;
  const nlohmann::json snap = {{"seq", event.seq}, {"state", state_to_json(after)}};
  const auto tmp = dir_ / "snapshot.json.tmp";
  {
    std::ofstream out(tmp, std::ios::trunc | std::ios::binary);
    out << snap.dump() << '\n';
    if (!out) throw Error(ErrorCode::kIoError, "cannot write snapshot in " + dir_.string());
  }
  std::error_code ec;
  fs::rename(tmp, dir_ / "snapshot.json", ec);
  if (ec) throw Error(ErrorCode::kIoError, "cannot install snapshot: " + ec.message());
}

std::vector<SessionEvent> read_event_log(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::vector<SessionEvent> events;
  std::size_t start = 0;
  std::size_t line_no = 0;
  while (start < text.size()) {
    ++line_no;
    const auto end = text.find('\n', start);
    if (end == std::string::npos) {
      throw Error(ErrorCode::kCorruptLog, path.string() + ": line " + std::to_string(line_no) + " is truncated");
    }
    const std::string_view line(text.data() + start, end - start);
    start = end + 1;
    try {
      events.push_back(event_from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kCorruptLog, path.string() + ": line " + std::to_string(line_no) + ": " + e.what());
    } catch (const Error& e) {
      throw Error(ErrorCode::kCorruptLog, path.string() + ": line " + std::to_string(line_no) + ": " + e.detail());
    }
    if (events.back().seq != events.size()) {
      throw Error(ErrorCode::kCorruptLog, path.string() + ": seq gap at line " + std::to_string(line_no));
    }
  }
  return events;
}

ProfileState replay(std::span<const SessionEvent> events, ProfileState start) {
  for (const auto& e : events) start = apply(std::move(start), e);
  return start;
}

ProfileState load_profile(const fs::path& root, const std::string& profile_id, bool use_snapshot) {
  const auto log_path = event_log_path(root, profile_id);
  if (!fs::exists(log_path)) throw Error(ErrorCode::kUnknownProfile, profile_id);
  const auto events = read_event_log(log_path);
  const auto snap_path = snapshot_path(root, profile_id);
  if (use_snapshot && fs::exists(snap_path)) {
    std::ifstream in(snap_path, std::ios::binary);
    nlohmann::json snap;
    try {
      snap = nlohmann::json::parse(in).at("state");
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kCorruptLog, snap_path.string() + ": " + e.what());
    }
    auto state = state_from_json(snap);
    const auto seq = state.last_seq;
    if (seq > events.size()) throw Error(ErrorCode::kCorruptLog, "snapshot is ahead of the event log");
    return replay(std::span(events).subspan(seq), std::move(state));
  }
  return replay(events);
}

std::vector<std::string> list_profiles(const fs::path& root) {
  std::vector<std::string> out;
  std::error_code ec;
  if (!fs::is_directory(root, ec)) return out;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (entry.is_directory() && fs::exists(entry.path() / "events.jsonl")) {
      out.push_back(entry.path().filename().string());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace phonoloop
