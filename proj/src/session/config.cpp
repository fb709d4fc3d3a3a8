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

#include "phonoloop/session/config.hpp"

#include <cstdlib>
#include <fstream>

#include <json.hpp>

#include "phonoloop/error.hpp"

namespace phonoloop {

std::optional<std::string> process_env(const std::string& name) {
  const char* v = std::getenv(name.c_str());
  if (v == nullptr) return std::nullopt;
  return std::string(v);
}

ServerConfig load_server_config(const std::optional<std::filesystem::path>& file, const EnvLookup& env) {
  ServerConfig c;
  try {
    if (file) {
      std::ifstream in(*file);
      if (!in) throw Error(ErrorCode::kIoError, "cannot open config " + file->string());
      const auto j = nlohmann::json::parse(in);
      c.host = j.value("host", c.host);
      c.port = j.value("port", c.port);
      c.store_path = j.value("store_path", c.store_path.string());
      c.data_dir = j.value("data_dir", c.data_dir.string());
      c.recognizer_endpoint = j.value("recognizer_endpoint", c.recognizer_endpoint);
      c.generator_endpoint = j.value("generator_endpoint", c.generator_endpoint);
      c.gate_threshold_db = j.value("gate_threshold_db", c.gate_threshold_db);
      c.snapshot_interval = j.value("snapshot_interval", c.snapshot_interval);
      if (c.data_dir.is_relative()) c.data_dir = file->parent_path() / c.data_dir;
    }
    if (auto v = env("PHONOLOOP_PORT")) c.port = std::stoi(*v);
    if (auto v = env("PHONOLOOP_STORE_PATH")) c.store_path = *v;
    if (auto v = env("PHONOLOOP_RECOGNIZER_ENDPOINT")) c.recognizer_endpoint = *v;
    if (auto v = env("PHONOLOOP_GATE_THRESHOLD_DB")) c.gate_threshold_db = std::stod(*v);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kBadConfig, std::string("server config: ") + e.what());
  } catch (const std::logic_error& e) {
    throw Error(ErrorCode::kBadConfig, std::string("server config value: ") + e.what());
  }
  if (c.port < 0 || c.port > 65535) throw Error(ErrorCode::kBadConfig, "port out of range");
  return c;
}

}  // namespace phonoloop
