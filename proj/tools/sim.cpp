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

// sim run | compare | speaker

#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "phonoloop/error.hpp"
#include "phonoloop/sim/campaign.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw phonoloop::Error(phonoloop::ErrorCode::kIoError, "cannot write " + path);
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace phonoloop;
  CLI::App app{"Personalization campaign simulator"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run a campaign and export learning curves");
  std::string fixture_path;
  std::string strategy = "uncertainty";
  std::size_t seeds = 0;
  std::string out_path;
  std::string summary_path;
  std::size_t threads = 0;
  run->add_option("--fixture", fixture_path, "Fixture JSON")->required();
  run->add_option("--strategy", strategy, "uncertainty, random or coverage")
      ->check(CLI::IsMember({"uncertainty", "random", "coverage"}));
  run->add_option("--seeds", seeds, "Number of seeds (default: fixture)");
  run->add_option("--out", out_path, "Curve CSV")->required();
  run->add_option("--summary", summary_path, "Per-seed summary CSV");
  run->add_option("--threads", threads, "Worker threads (default: hardware)");

  auto* compare = app.add_subcommand("compare", "Paired comparison of two curve files");
  std::string a_path;
  std::string b_path;
  std::string report_path;
  compare->add_option("--a", a_path)->required();
  compare->add_option("--b", b_path)->required();
  compare->add_option("--report", report_path)->required();

  auto* speaker = app.add_subcommand("speaker", "Materialize a synthetic speaker");
  std::string spec_path;
  std::string speaker_out;
  speaker->add_option("--spec", spec_path, "Speaker spec JSON")->required();
  speaker->add_option("--out", speaker_out, "Speaker JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*run) {
      const auto fixture = load_fixture(fixture_path);
      auto campaign =
          campaign_from_fixture(fixture, strategy_from_name(strategy), seeds == 0 ? fixture.seed_count : seeds);
      campaign.track_target = !summary_path.empty();
      const auto result = run_campaign(campaign, threads);
      export_curves(result.curves, out_path);
      if (!summary_path.empty()) write_text(summary_path, summaries_csv(result.summaries));
    } else if (*compare) {
      const auto a = read_curves(a_path);
      const auto b = read_curves(b_path);
      const auto name_of = [](const std::vector<CurvePoint>& c, const std::string& fallback) {
        return c.empty() ? fallback : c.front().strategy;
      };
      const auto cmp = compare_curves(a, b);
      const auto report = comparison_report(cmp, name_of(a, "a"), name_of(b, "b"));
      write_text(report_path, report);
      std::cout << report;
    } else if (*speaker) {
      std::ifstream in(spec_path);
      if (!in) throw Error(ErrorCode::kIoError, "cannot open " + spec_path);
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(in);
      } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::kBadSpec, e.what());
      }
      PhonemeInventory inventory;
      if (j.contains("inventory") && j.at("inventory").is_array()) {
        inventory = PhonemeInventory(j.at("inventory").get<std::vector<std::string>>());
      } else if (j.contains("inventory_ref")) {
        const auto base = std::filesystem::path(spec_path).parent_path();
        inventory = PhonemeInventory::load(base / j.at("inventory_ref").get<std::string>());
      } else {
        throw Error(ErrorCode::kBadSpec, "spec needs 'inventory' or 'inventory_ref'");
      }
      const auto profile = make_speaker(inventory, speaker_spec_from_json(j));
      write_text(speaker_out, speaker_to_json(profile).dump(2) + "\n");
    }
  } catch (const Error& e) {
    std::cerr << "sim: " << e.what() << "\n";
    return kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "sim: " << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}
