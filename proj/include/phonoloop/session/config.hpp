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

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>

#include "phonoloop/audio/snr_gate.hpp"
#include "phonoloop/session/store.hpp"

namespace phonoloop {

struct ServerConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::filesystem::path store_path = "phonoloop-store";
  std::filesystem::path data_dir = ".";  // base for lexicon_ref and templates_ref
  std::string recognizer_endpoint;
  std::string generator_endpoint;
  double gate_threshold_db = kDefaultGateThresholdDb;
  std::size_t snapshot_interval = kDefaultSnapshotInterval;
};

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

std::optional<std::string> process_env(const std::string& name);

// JSON file (all keys optional), then PHONOLOOP_PORT, PHONOLOOP_STORE_PATH,
// PHONOLOOP_RECOGNIZER_ENDPOINT and PHONOLOOP_GATE_THRESHOLD_DB. Throws
// BadConfig, IoError.
ServerConfig load_server_config(const std::optional<std::filesystem::path>& file, const EnvLookup& env = process_env);

}  // namespace phonoloop
