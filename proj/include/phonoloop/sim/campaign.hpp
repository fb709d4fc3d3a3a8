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

#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "phonoloop/curriculum/curriculum.hpp"
#include "phonoloop/recognizer/speaker.hpp"
#include "phonoloop/session/profile_state.hpp"

namespace phonoloop {

enum class CorrectionPolicy { kOracleAll, kOracleHighOnly };

std::string_view policy_name(CorrectionPolicy policy);
CorrectionPolicy policy_from_name(std::string_view name);

// Versioned campaign setup; paths inside the file are relative to it.
struct Fixture {
  int version = 1;
  Lexicon lexicon;
  std::vector<SentenceTemplate> templates;
  SpeakerSpec speaker;  // seed is replaced per campaign seed
  std::size_t rounds = 15;
  std::size_t prompts_per_round = 10;
  CorrectionPolicy policy = CorrectionPolicy::kOracleAll;
  std::uint64_t seed_base = 1;
  std::size_t seed_count = 20;
  double target_fraction = 0.5;
  ProfileConfig profile;  // passes, eval set and cold-start settings
};

// Throws BadConfig, IoError.
Fixture load_fixture(const std::filesystem::path& path);

struct Campaign {
  Strategy strategy = Strategy::kUncertainty;
  std::size_t rounds = 15;
  std::size_t prompts_per_round = 10;
  CorrectionPolicy policy = CorrectionPolicy::kOracleAll;
  std::vector<std::uint64_t> seeds;
  SpeakerSpec speaker_spec;
  Lexicon lexicon;
  std::vector<SentenceTemplate> templates;
  ProfileConfig profile;
  // Evaluate after every corrected utterance until eval WER drops to
  // target_fraction of the seed's round-0 WER.
  bool track_target = false;
  double target_fraction = 0.5;
};

Campaign campaign_from_fixture(const Fixture& fixture, Strategy strategy, std::size_t n_seeds);

struct CurvePoint {
  std::uint64_t seed = 0;
  std::size_t round = 0;
  std::string strategy;
  double wer_eval = 0.0;
  double minutes_interaction = 0.0;
  std::size_t n_corrections = 0;
  double mean_phd = 0.0;

  bool operator==(const CurvePoint&) const = default;
};

inline constexpr std::size_t kTargetNotReached = std::numeric_limits<std::size_t>::max();

struct SeedSummary {
  std::uint64_t seed = 0;
  double initial_wer = 0.0;
  double final_wer = 0.0;
  std::size_t utterances = 0;
  std::size_t utterances_to_target = kTargetNotReached;
  // Wrong final-eval words and their reference: (reference, decoded).
  std::vector<std::pair<std::string, std::string>> residual_errors;

  bool operator==(const SeedSummary&) const = default;
};

struct CampaignResult {
  std::vector<CurvePoint> curves;      // sorted by (seed, round)
  std::vector<SeedSummary> summaries;  // sorted by seed
};

// Seeds run on separate threads; each seed's session is sequential.
CampaignResult run_campaign(const Campaign& campaign, std::size_t threads = 0);

// Throws IoError; an empty curve set writes nothing.
void export_curves(const std::vector<CurvePoint>& curves, const std::filesystem::path& path);
std::string curves_csv(const std::vector<CurvePoint>& curves);
std::vector<CurvePoint> read_curves(const std::filesystem::path& path);

std::string summaries_csv(const std::vector<SeedSummary>& summaries);

// Trapezoid area of wer_eval over rounds for one seed.
double curve_area(const std::vector<CurvePoint>& curves, std::uint64_t seed);

// P(X >= wins) for X ~ Binomial(n, 1/2).
double sign_test_p(std::size_t wins, std::size_t n);

struct Comparison {
  std::size_t pairs = 0;
  std::size_t a_wins = 0;  // strictly smaller area for A
  std::size_t ties = 0;
  double p_value = 1.0;
  double a_median_final = 0.0;
  double b_median_final = 0.0;
};

// Paired by seed; throws BadConfig when no seed is shared.
Comparison compare_curves(const std::vector<CurvePoint>& a, const std::vector<CurvePoint>& b);
std::string comparison_report(const Comparison& c, std::string_view a_name, std::string_view b_name);

double median(std::vector<double> values);

// Median wer_eval per round across seeds.
std::vector<double> median_curve(const std::vector<CurvePoint>& curves);

}  // namespace phonoloop
