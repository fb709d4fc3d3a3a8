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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>

#include "phonoloop/recognizer/speaker.hpp"
#include "phonoloop/sim/campaign.hpp"
#include "support.hpp"

using namespace phonoloop;
using namespace phonoloop::testing;

namespace {

std::filesystem::path standard_fixture() { return source_dir() / "fixtures/standard/standard.json"; }

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

Campaign short_campaign(Strategy strategy, std::size_t seeds, std::size_t rounds) {
  auto c = campaign_from_fixture(load_fixture(standard_fixture()), strategy, seeds);
  c.rounds = rounds;
  c.prompts_per_round = 5;
  return c;
}

int run_cli(const std::string& args) {
  const char* bin = std::getenv("PHONOLOOP_SIM_BIN");
  REQUIRE(bin != nullptr);
  const int status = std::system((std::string(bin) + " " + args + " >/dev/null 2>&1").c_str());
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

CurvePoint point(std::uint64_t seed, std::size_t round, double wer) { return {seed, round, "x", wer, 0.0, 0, 0.0}; }

}  // namespace

TEST_CASE("standard fixture loads") {
  const auto f = load_fixture(standard_fixture());
  CHECK(f.lexicon.inventory().size() == 20);
  CHECK(f.lexicon.size() == 200);
  CHECK(f.speaker.n_difficult == 5);
  CHECK(f.speaker.severity == 0.8);
  CHECK(f.rounds == 15);
  CHECK(f.prompts_per_round == 10);
  CHECK(f.seed_count == 20);
  CHECK(f.profile.passes == 10);
  CHECK_FALSE(f.templates.empty());
  CHECK(error_of([] { load_fixture("/nonexistent/fixture.json"); }) == ErrorCode::kIoError);

  TempDir dir;
  write_file(dir.path() / "bad.json", "{\"lexicon\": 3}");
  CHECK(error_of([&] { load_fixture(dir.path() / "bad.json"); }) == ErrorCode::kBadConfig);
}

TEST_CASE("export_curves") {
  TempDir dir;
  const std::vector<CurvePoint> curves{{1, 2, "random", 0.25, 3.5, 7, 0.5},
                                       {1, 0, "random", 0.5, 0.0, 0, 0.9},
                                       {1, 1, "random", 0.375, 1.75, 4, 0.7}};
  export_curves(curves, dir.path() / "a.csv");
  const auto text = read_file(dir.path() / "a.csv");
  CHECK(text ==
        "seed,round,strategy,wer_eval,minutes_interaction,n_corrections,mean_phd\n"
        "1,0,random,0.500000,0.000000,0,0.900000\n"
        "1,1,random,0.375000,1.750000,4,0.700000\n"
        "1,2,random,0.250000,3.500000,7,0.500000\n");
  export_curves(curves, dir.path() / "a.csv");
  CHECK(read_file(dir.path() / "a.csv") == text);
  auto back = read_curves(dir.path() / "a.csv");
  CHECK(back.size() == 3);
  CHECK(back[2] == curves[0]);

  CHECK(error_of([&] { export_curves({}, dir.path() / "empty.csv"); }) == ErrorCode::kIoError);
  CHECK_FALSE(std::filesystem::exists(dir.path() / "empty.csv"));
  CHECK(error_of([&] { export_curves(curves, dir.path() / "missing/dir/a.csv"); }) == ErrorCode::kIoError);

  write_file(dir.path() / "junk.csv", "hello\n");
  CHECK(error_of([&] { read_curves(dir.path() / "junk.csv"); }) == ErrorCode::kParseError);
}

TEST_CASE("campaigns are deterministic and contiguous") {
  const auto c = short_campaign(Strategy::kUncertainty, 3, 3);
  const auto a = run_campaign(c, 3);
  const auto b = run_campaign(c, 1);
  CHECK(curves_csv(a.curves) == curves_csv(b.curves));
  CHECK(a.summaries == b.summaries);
  REQUIRE(a.curves.size() == 3 * 4);
  for (std::size_t i = 0; i < a.curves.size(); ++i) {
    CHECK(a.curves[i].seed == c.seeds[i / 4]);
    CHECK(a.curves[i].round == i % 4);
    CHECK(a.curves[i].strategy == "uncertainty");
    if (i % 4 > 0) {
      CHECK(a.curves[i].minutes_interaction > a.curves[i - 1].minutes_interaction);
      CHECK(a.curves[i].n_corrections > a.curves[i - 1].n_corrections);
    }
  }
  CHECK(a.curves[0].n_corrections == 0);
}

TEST_CASE("high-only policy corrects fewer slots") {
  auto all = short_campaign(Strategy::kUncertainty, 2, 2);
  auto high = all;
  high.policy = CorrectionPolicy::kOracleHighOnly;
  const auto ra = run_campaign(all);
  const auto rh = run_campaign(high);
  CHECK(rh.curves.back().n_corrections < ra.curves.back().n_corrections);
  CHECK(policy_from_name(policy_name(CorrectionPolicy::kOracleHighOnly)) == CorrectionPolicy::kOracleHighOnly);
  CHECK(error_of([] { policy_from_name("sometimes"); }) == ErrorCode::kBadConfig);
}

TEST_CASE("a mild speaker yields a low flat curve") {
  auto c = short_campaign(Strategy::kUncertainty, 3, 3);
  c.speaker_spec = SpeakerSpec{0, 0.0, 0};
  const auto r = run_campaign(c);
  for (const auto& s : r.summaries) {
    CAPTURE(s.seed);
    CHECK(s.initial_wer < 0.1);
  }
  for (const auto& p : r.curves) {
    const double start = r.summaries.at(p.seed - c.seeds.front()).initial_wer;
    CHECK(std::abs(p.wer_eval - start) <= 0.05);
  }
}

TEST_CASE("target tracking records utterances") {
  auto c = short_campaign(Strategy::kUncertainty, 2, 4);
  c.track_target = true;
  c.target_fraction = 0.99;
  const auto r = run_campaign(c);
  for (const auto& s : r.summaries) {
    CHECK(s.utterances > 0);
    if (s.utterances_to_target != kTargetNotReached) CHECK(s.utterances_to_target <= s.utterances);
  }
  c.target_fraction = 0.0;
  for (const auto& s : run_campaign(c).summaries) CHECK(s.utterances_to_target == kTargetNotReached);
  CHECK(summaries_csv(run_campaign(c).summaries).find(",inf\n") != std::string::npos);
}

TEST_CASE("statistics helpers") {
  CHECK(sign_test_p(0, 20) == 1.0);
  CHECK(sign_test_p(20, 20) == doctest::Approx(std::pow(0.5, 20)).epsilon(1e-12));
  CHECK(sign_test_p(15, 20) == doctest::Approx(21700.0 / 1048576.0).epsilon(1e-12));
  CHECK(sign_test_p(1, 1) == 0.5);
  CHECK(error_of([] { sign_test_p(3, 2); }) == ErrorCode::kBadConfig);

  CHECK(median({}) == 0.0);
  CHECK(median({3, 1, 2}) == 2.0);
  CHECK(median({4, 1, 3, 2}) == 2.5);

  const std::vector<CurvePoint> a{point(1, 0, 0.6), point(1, 1, 0.2), point(2, 0, 0.5), point(2, 1, 0.5),
                                  point(3, 0, 0.4), point(3, 2, 0.0)};
  const std::vector<CurvePoint> b{point(1, 0, 0.6), point(1, 1, 0.4), point(2, 0, 0.5), point(2, 1, 0.5),
                                  point(4, 0, 0.1)};
  CHECK(curve_area(a, 1) == doctest::Approx(0.4));
  CHECK(curve_area(a, 3) == doctest::Approx(0.4));
  CHECK(curve_area(a, 9) == 0.0);
  const auto cmp = compare_curves(a, b);
  CHECK(cmp.pairs == 2);
  CHECK(cmp.a_wins == 1);
  CHECK(cmp.ties == 1);
  CHECK(cmp.p_value == doctest::Approx(0.75));
  CHECK(cmp.a_median_final == doctest::Approx(0.35));
  CHECK(cmp.b_median_final == doctest::Approx(0.45));
  CHECK(error_of([&] { compare_curves(a, {point(7, 0, 0.1)}); }) == ErrorCode::kBadConfig);
  CHECK(comparison_report(cmp, "u", "r").find("u lower WER area: 1 (1 ties)") != std::string::npos);
  CHECK(median_curve(a) == std::vector<double>{0.5, 0.35, 0.0});
}

TEST_CASE("sim CLI exit codes") {
  TempDir dir;
  const auto d = dir.path().string();
  CHECK(run_cli("") == 1);
  CHECK(run_cli("bogus") == 1);
  CHECK(run_cli("run --out " + d + "/x.csv") == 1);
  CHECK(run_cli("run --fixture " + standard_fixture().string() + " --strategy greedy --out " + d + "/x.csv") == 1);
  CHECK(run_cli("run --fixture " + d + "/none.json --out " + d + "/x.csv") == 2);

  const std::string fixture = R"({"version":1,"inventory":")" +
                              (source_dir() / "fixtures/standard/inventory.txt").string() + R"(","lexicon":")" +
                              (source_dir() / "fixtures/standard/lexicon.tsv").string() +
                              R"(","speaker":{"n_difficult":2,"severity":0.5},"rounds":2,"prompts_per_round":3,)"
                              R"("seeds":2,"profile":{"cold_start_budget":4,"eval_words":20}})";
  write_file(dir.path() / "bare.json", fixture);
  CHECK(run_cli("run --fixture " + d + "/bare.json --out " + d + "/bare.csv --strategy random") == 0);
  CHECK(run_cli("run --fixture " + d + "/bare.json --out " + d + "/bare.csv") == 2);

  const std::string templates = (source_dir() / "fixtures/standard/templates.txt").string();
  write_file(dir.path() / "tiny.json", fixture.substr(0, fixture.size() - 1) + R"(,"templates":")" + templates + "\"}");
  const std::string run = "run --fixture " + d + "/tiny.json --out ";
  CHECK(run_cli(run + d + "/u.csv --summary " + d + "/s.csv") == 0);
  CHECK(run_cli(run + d + "/r.csv --strategy random") == 0);
  CHECK(run_cli(run + d + "/u2.csv --threads 1") == 0);
  CHECK(read_file(d + "/u.csv") == read_file(d + "/u2.csv"));
  CHECK(read_curves(d + "/u.csv").size() == 2 * 3);
  CHECK(read_file(d + "/s.csv").rfind("seed,initial_wer,final_wer,utterances,utterances_to_target\n", 0) == 0);

  CHECK(run_cli("compare --a " + d + "/u.csv --b " + d + "/r.csv --report " + d + "/rep.txt") == 0);
  CHECK(read_file(d + "/rep.txt").rfind("paired seeds: 2\n", 0) == 0);
  CHECK(run_cli("compare --a " + d + "/u.csv --b " + d + "/missing.csv --report " + d + "/rep.txt") == 2);

  write_file(dir.path() / "spec.json", R"({"inventory":["a","b","c","d"],"n_difficult":2,"severity":0.6,"seed":9})");
  CHECK(run_cli("speaker --spec " + d + "/spec.json --out " + d + "/sp1.json") == 0);
  CHECK(run_cli("speaker --spec " + d + "/spec.json --out " + d + "/sp2.json") == 0);
  CHECK(read_file(d + "/sp1.json") == read_file(d + "/sp2.json"));
  const auto speaker = speaker_from_json(nlohmann::json::parse(read_file(d + "/sp1.json")));
  CHECK(std::count(speaker.deletion_rate.begin(), speaker.deletion_rate.end(), 0.6 / 5) == 2);
  write_file(dir.path() / "bad_spec.json", R"({"inventory":["a","b"],"n_difficult":5,"severity":0.6,"seed":9})");
  CHECK(run_cli("speaker --spec " + d + "/bad_spec.json --out " + d + "/sp3.json") == 2);
}
