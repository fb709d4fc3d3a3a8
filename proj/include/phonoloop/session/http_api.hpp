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

#include <json.hpp>

#include "phonoloop/error.hpp"
#include "phonoloop/session/config.hpp"
#include "phonoloop/session/engine.hpp"

namespace httplib {
class Server;
}

namespace phonoloop {

int http_status_for(ErrorCode code);

nlohmann::json profile_summary_json(const ProfileState& state);

// JSON routes over a SessionEngine. Error bodies are
// {"error": <code name>, "detail": ...}.
class HttpApi {
 public:
  HttpApi(SessionEngine& engine, ServerConfig config);

  void register_routes(httplib::Server& server);

  // Body of POST /profiles. Lexicon and templates come either inline
  // ("lexicon": TSV text, "templates": [str]) or as paths relative to the
  // data directory ("lexicon_ref", "inventory_ref", "templates_ref").
  ProfileRequest profile_request_from_json(const nlohmann::json& body) const;

 private:
  SessionEngine& engine_;
  ServerConfig config_;
};

}  // namespace phonoloop
