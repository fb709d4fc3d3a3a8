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

#include <csignal>
#include <iostream>

#include <CLI11.hpp>
#include <httplib.h>

#include "phonoloop/error.hpp"
#include "phonoloop/session/config.hpp"
#include "phonoloop/session/engine.hpp"
#include "phonoloop/session/http_api.hpp"

namespace {

httplib::Server* g_server = nullptr;

void stop(int) {
  if (g_server != nullptr) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
  using namespace phonoloop;
  CLI::App app{"Personalization session server"};
  std::string config_path;
  app.add_option("--config", config_path, "Server config JSON");
  CLI11_PARSE(app, argc, argv);

  try {
    const auto config =
        load_server_config(config_path.empty() ? std::nullopt : std::optional<std::filesystem::path>(config_path));
    EngineOptions options;
    options.store_dir = config.store_path;
    options.snapshot_interval = config.snapshot_interval;
    if (!config.generator_endpoint.empty()) {
      options.generator = std::make_shared<HttpTextGenerator>(config.generator_endpoint);
    }
    SessionEngine engine(std::move(options));
    const auto loaded = engine.load_all();

    httplib::Server server;
    HttpApi api(engine, config);
    api.register_routes(server);
    g_server = &server;
    std::signal(SIGINT, stop);
    std::signal(SIGTERM, stop);
    std::cerr << "phonoloop_server: " << loaded << " profiles from " << config.store_path << ", listening on "
              << config.host << ":" << config.port << "\n";
    if (!server.listen(config.host, config.port)) {
      std::cerr << "phonoloop_server: cannot bind " << config.host << ":" << config.port << "\n";
      return 2;
    }
  } catch (const Error& e) {
    std::cerr << "phonoloop_server: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
