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

#include <span>
#include <vector>

#include <json.hpp>

#include "phonoloop/audio/wav.hpp"

namespace phonoloop {

inline constexpr int kGateConstantsVersion = 1;
inline constexpr std::uint32_t kFrameMs = 25;
inline constexpr std::uint32_t kHopMs = 10;
inline constexpr std::uint32_t kMinClipMs = 100;
inline constexpr std::uint32_t kNoisePercentile = 10;
inline constexpr std::uint32_t kSpeechPercentile = 90;
inline constexpr double kNoiseFloorEnergy = 1e-12;
inline constexpr double kMaxSnrDb = 120.0;
inline constexpr double kDefaultGateThresholdDb = 15.0;

struct SnrReport {
  double snr_db = 0.0;
  double noise_floor = 0.0;
  double speech_level = 0.0;
  bool accepted = false;
  double threshold_db = kDefaultGateThresholdDb;

  bool operator==(const SnrReport&) const = default;
};

// Mean squared sample per 25 ms frame, 10 ms hop, partial tail dropped.
// Throws TooShort when the clip holds less than one frame.
std::vector<double> frame_energies(const PcmClip& clip);

// Nearest-rank percentile: the ceil(p/100 * n)-th smallest value.
double nearest_rank_percentile(std::span<const double> values, std::uint32_t percent);

// Throws TooShort below 100 ms.
SnrReport estimate_snr(const PcmClip& clip, double threshold_db = kDefaultGateThresholdDb);

nlohmann::json snr_report_to_json(const SnrReport& report);
// Everything a second implementation needs to agree with this one.
nlohmann::json gate_constants_json();

}  // namespace phonoloop
