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

#include "phonoloop/sim/campaign.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include <boost/math/distributions/binomial.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "phonoloop/error.hpp"
#include "phonoloop/random.hpp"
#include "phonoloop/session/engine.hpp"

namespace phonoloop {

namespace {

constexpr std::uint64_t kSpeakerSeedTag = 0x5a3d1e0f00000030ULL;

std::vector<std::pair<std::string, std::string>> residual_errors(const ProfileState& state) {
  std::vector<std::pair<std::string, std::string>> out;
  const SlotDecoder decoder(*state.lexicon, state.model);
  const auto matrix = expected_confusion(state.model);
  for (const auto& rendering : state.eval->renderings) {
    for (std::size_t i = 0; i < rendering.size(); ++i) {
      const auto& decoded = state.lexicon->entries()[decoder.best(rendering[i], matrix)].word;
      if (fold_case(decoded) != fold_case(state.eval->words[i])) out.emplace_back(state.eval->words[i], decoded);
    }
  }
  return out;
}

CurvePoint point_from(std::uint64_t seed, const MetricsEntry& m) {
  return {seed, m.round, m.strategy, m.wer_eval.value_or(0.0), m.minutes_interaction, m.n_corrections, m.mean_phd};
}

struct SeedRun {
  std::vector<CurvePoint> curve;
  SeedSummary summary;
};

SeedRun run_seed(const Campaign& c, std::uint64_t seed) {
  EngineOptions options;
  options.clock = [] { return std::string("1970-01-01T00:00:00.000Z"); };
  options.id_generator = [seed] { return fmt::format("sim-{}", seed); };
  SessionEngine engine(std::move(options));

  ProfileRequest request{c.lexicon, c.templates, c.profile};
  request.config.mode = ProfileMode::kSimulated;
  request.config.seed = seed;
  request.config.strategy = c.strategy;
  SpeakerSpec spec = c.speaker_spec;
  spec.seed = derive_seed(seed, kSpeakerSeedTag);
  request.config.speaker_spec = spec;
  const auto id = engine.create_profile(request);

  SeedRun run;
  run.summary.seed = seed;
  const auto initial = engine.profile(id)->metrics.front();
  run.curve.push_back(point_from(seed, initial));
  run.summary.initial_wer = initial.wer_eval.value_or(0.0);
  const double target = c.target_fraction * run.summary.initial_wer;
  bool reached = run.summary.initial_wer <= target;
  if (reached) run.summary.utterances_to_target = 0;

  auto record_round = [&](const IssuedPlan& issued) {
    for (const auto& ref : issued.prompt_refs) {
      const auto outcome = engine.submit_recording(id, ref, {true, {}});
      const auto transcript = engine.transcribe(id, outcome.utterance_id);
      const auto& truth = engine.profile(id)->recordings.at(outcome.utterance_id)->utterance.prompt_words;
      for (std::size_t slot = 0; slot < transcript.slots.size(); ++slot) {
        const auto& s = transcript.slots[slot];
        if (c.policy == CorrectionPolicy::kOracleHighOnly && s.band != Band::kHigh) continue;
        const bool offered = fold_case(s.word) == fold_case(truth[slot]) ||
                             std::any_of(s.alternatives.begin(), s.alternatives.end(), [&](const std::string& w) {
                               return fold_case(w) == fold_case(truth[slot]);
                             });
        CorrectionRecord correction;
        correction.utterance_id = outcome.utterance_id;
        correction.slot_index = slot;
        correction.chosen_word = truth[slot];
        correction.source = offered ? CorrectionSource::kTopK : CorrectionSource::kManual;
        engine.apply_correction(id, correction);
      }
      ++run.summary.utterances;
      if (c.track_target && !reached && evaluate_wer(*engine.profile(id)) <= target) {
        reached = true;
        run.summary.utterances_to_target = run.summary.utterances;
      }
    }
  };

  while (!engine.profile(id)->cold_start_complete()) {
    const auto issued = engine.next_prompts(id, c.prompts_per_round);
    if (issued.prompt_refs.empty()) break;
    record_round(issued);
  }
  for (std::size_t r = 1; r <= c.rounds; ++r) {
    record_round(engine.next_prompts(id, c.prompts_per_round));
    try {
      run.curve.push_back(point_from(seed, engine.run_adaptation_round(id)));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kNothingToAdapt) throw;
      const auto state = engine.profile(id);
      MetricsEntry m = state->metrics.back();
      m.round = r;
      m.minutes_interaction = state->minutes_interaction();
      run.curve.push_back(point_from(seed, m));
    }
  }
  const auto final_state = engine.profile(id);
  run.summary.final_wer = run.curve.back().wer_eval;
  run.summary.residual_errors = residual_errors(*final_state);
  return run;
}

std::string fmt_real(double v) { return fmt::format("{:.6f}", v); }

}  // namespace

std::string_view policy_name(CorrectionPolicy policy) {
  return policy == CorrectionPolicy::kOracleAll ? "oracle_all" : "oracle_high_only";
}

CorrectionPolicy policy_from_name(std::string_view name) {
  if (name == "oracle_all") return CorrectionPolicy::kOracleAll;
  if (name == "oracle_high_only") return CorrectionPolicy::kOracleHighOnly;
  throw Error(ErrorCode::kBadConfig, "unknown correction policy '" + std::string(name) + "'");
}

Fixture load_fixture(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open fixture " + path.string());
  const auto base = path.parent_path();
  try {
    const auto j = nlohmann::json::parse(in);
    Fixture f;
    f.version = j.value("version", 1);
    std::optional<std::filesystem::path> inventory;
    if (j.contains("inventory")) inventory = base / j.at("inventory").get<std::string>();
    f.lexicon = Lexicon::load(base / j.at("lexicon").get<std::string>(), inventory);
    if (j.contains("templates")) f.templates = load_templates(base / j.at("templates").get<std::string>());
    f.speaker.n_difficult = j.at("speaker").at("n_difficult").get<std::size_t>();
    f.speaker.severity = j.at("speaker").at("severity").get<double>();
    f.rounds = j.value("rounds", f.rounds);
    f.prompts_per_round = j.value("prompts_per_round", f.prompts_per_round);
    f.policy = policy_from_name(j.value("policy", std::string(policy_name(f.policy))));
    f.seed_base = j.value("seed_base", f.seed_base);
    f.seed_count = j.value("seeds", f.seed_count);
    f.target_fraction = j.value("target_fraction", f.target_fraction);
    f.profile = config_from_json(j.value("profile", nlohmann::json::object()));
    if (f.rounds < 1) throw Error(ErrorCode::kBadConfig, "rounds must be at least 1");
    return f;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kBadConfig, "fixture " + path.string() + ": " + e.what());
  }
}

Campaign campaign_from_fixture(const Fixture& fixture, Strategy strategy, std::size_t n_seeds) {
  Campaign c;
  c.strategy = strategy;
  c.rounds = fixture.rounds;
  c.prompts_per_round = fixture.prompts_per_round;
  c.policy = fixture.policy;
  for (std::size_t i = 0; i < n_seeds; ++i) c.seeds.push_back(fixture.seed_base + i);
  c.speaker_spec = fixture.speaker;
  c.lexicon = fixture.lexicon;
  c.templates = fixture.templates;
  c.profile = fixture.profile;
  c.target_fraction = fixture.target_fraction;
  return c;
}

CampaignResult run_campaign(const Campaign& campaign, std::size_t threads) {
  if (campaign.rounds < 1) throw Error(ErrorCode::kBadConfig, "rounds must be at least 1");
  if (campaign.seeds.empty()) throw Error(ErrorCode::kBadConfig, "no seeds");
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, campaign.seeds.size());

  std::vector<SeedRun> runs(campaign.seeds.size());
  std::vector<std::exception_ptr> failures(campaign.seeds.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < campaign.seeds.size(); i = next++) {
      try {
        runs[i] = run_seed(campaign, campaign.seeds[i]);
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }

  CampaignResult result;
  for (auto& r : runs) {
    result.curves.insert(result.curves.end(), r.curve.begin(), r.curve.end());
    result.summaries.push_back(std::move(r.summary));
  }
  std::sort(result.curves.begin(), result.curves.end(), [](const CurvePoint& a, const CurvePoint& b) {
    return std::tie(a.seed, a.round) < std::tie(b.seed, b.round);
  });
  std::sort(result.summaries.begin(), result.summaries.end(),
            [](const SeedSummary& a, const SeedSummary& b) { return a.seed < b.seed; });
  return result;
}

std::string curves_csv(const std::vector<CurvePoint>& curves) {
  auto sorted = curves;
  std::stable_sort(sorted.begin(), sorted.end(), [](const CurvePoint& a, const CurvePoint& b) {
    return std::tie(a.seed, a.round) < std::tie(b.seed, b.round);
  });
  std::string out = "seed,round,strategy,wer_eval,minutes_interaction,n_corrections,mean_phd\n";
  for (const auto& p : sorted) {
    out += fmt::format("{},{},{},{},{},{},{}\n", p.seed, p.round, p.strategy, fmt_real(p.wer_eval),
                       fmt_real(p.minutes_interaction), p.n_corrections, fmt_real(p.mean_phd));
  }
  return out;
}

void export_curves(const std::vector<CurvePoint>& curves, const std::filesystem::path& path) {
  if (curves.empty()) throw Error(ErrorCode::kIoError, "no curves to export");
  const auto text = curves_csv(curves);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::kIoError, "write failed for " + path.string());
}

std::vector<CurvePoint> read_curves(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line.rfind("seed,round,strategy", 0) != 0) {
    throw Error(ErrorCode::kParseError, path.string() + ": missing curve header");
  }
  std::vector<CurvePoint> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    if (cells.size() != 7) throw Error(ErrorCode::kParseError, path.string() + ": bad row '" + line + "'");
    try {
      out.push_back({std::stoull(cells[0]), std::stoul(cells[1]), cells[2], std::stod(cells[3]), std::stod(cells[4]),
                     std::stoul(cells[5]), std::stod(cells[6])});
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::kParseError, path.string() + ": bad row '" + line + "'");
    }
  }
  return out;
}

std::string summaries_csv(const std::vector<SeedSummary>& summaries) {
  std::string out = "seed,initial_wer,final_wer,utterances,utterances_to_target\n";
  for (const auto& s : summaries) {
    out += fmt::format("{},{},{},{},{}\n", s.seed, fmt_real(s.initial_wer), fmt_real(s.final_wer), s.utterances,
                       s.utterances_to_target == kTargetNotReached ? std::string("inf")
                                                                   : std::to_string(s.utterances_to_target));
  }
  return out;
}

double curve_area(const std::vector<CurvePoint>& curves, std::uint64_t seed) {
  std::map<std::size_t, double> by_round;
  for (const auto& p : curves) {
    if (p.seed == seed) by_round[p.round] = p.wer_eval;
  }
  double area = 0.0;
  for (auto it = by_round.begin(); it != by_round.end() && std::next(it) != by_round.end(); ++it) {
    const auto nx = std::next(it);
    area += 0.5 * (it->second + nx->second) * static_cast<double>(nx->first - it->first);
  }
  return area;
}

double sign_test_p(std::size_t wins, std::size_t n) {
  if (n == 0 || wins == 0) return 1.0;
  if (wins > n) throw Error(ErrorCode::kBadConfig, "more wins than pairs");
  const boost::math::binomial_distribution<double> dist(static_cast<double>(n), 0.5);
  return boost::math::cdf(boost::math::complement(dist, static_cast<double>(wins - 1)));
}

double median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const auto n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

std::vector<double> median_curve(const std::vector<CurvePoint>& curves) {
  std::map<std::size_t, std::vector<double>> by_round;
  for (const auto& p : curves) by_round[p.round].push_back(p.wer_eval);
  std::vector<double> out;
  for (auto& [round, values] : by_round) out.push_back(median(std::move(values)));
  return out;
}

Comparison compare_curves(const std::vector<CurvePoint>& a, const std::vector<CurvePoint>& b) {
  std::set<std::uint64_t> seeds_a;
  std::set<std::uint64_t> seeds_b;
  for (const auto& p : a) seeds_a.insert(p.seed);
  for (const auto& p : b) seeds_b.insert(p.seed);
  Comparison c;
  std::vector<double> final_a;
  std::vector<double> final_b;
  auto final_of = [](const std::vector<CurvePoint>& curves, std::uint64_t seed) {
    const CurvePoint* last = nullptr;
    for (const auto& p : curves) {
      if (p.seed == seed && (last == nullptr || p.round > last->round)) last = &p;
    }
    return last->wer_eval;
  };
  for (auto seed : seeds_a) {
    if (seeds_b.count(seed) == 0) continue;
    ++c.pairs;
    const double area_a = curve_area(a, seed);
    const double area_b = curve_area(b, seed);
    if (area_a < area_b) ++c.a_wins;
    if (area_a == area_b) ++c.ties;
    final_a.push_back(final_of(a, seed));
    final_b.push_back(final_of(b, seed));
  }
  if (c.pairs == 0) throw Error(ErrorCode::kBadConfig, "curve sets share no seed");
  c.p_value = sign_test_p(c.a_wins, c.pairs);
  c.a_median_final = median(final_a);
  c.b_median_final = median(final_b);
  return c;
}

std::string comparison_report(const Comparison& c, std::string_view a_name, std::string_view b_name) {
  return fmt::format(
      "paired seeds: {}\n"
      "{} lower WER area: {} ({} ties)\n"
      "one-sided sign test p: {:.6g}\n"
      "median final WER {}: {}\n"
      "median final WER {}: {}\n",
      c.pairs, a_name, c.a_wins, c.ties, c.p_value, a_name, fmt_real(c.a_median_final), b_name,
      fmt_real(c.b_median_final));
}

}  // namespace phonoloop
