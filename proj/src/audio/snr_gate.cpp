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

#include "phonoloop/audio/snr_gate.hpp"

#include <algorithm>
#include <cmath>

#include "phonoloop/error.hpp"

namespace phonoloop {

std::vector<double> frame_energies(const PcmClip& clip) {
  if (clip.sample_rate == 0) throw Error(ErrorCode::kBadConfig, "sample rate must be positive");
  const std::size_t frame = static_cast<std::size_t>(clip.sample_rate) * kFrameMs / 1000;
  const std::size_t hop = static_cast<std::size_t>(clip.sample_rate) * kHopMs / 1000;
  if (frame == 0 || hop == 0) throw Error(ErrorCode::kBadConfig, "sample rate too low for framing");
  if (clip.samples.size() < frame) {
    throw Error(ErrorCode::kTooShort, std::to_string(clip.samples.size()) + " samples, need " +
                                          std::to_string(frame) + " for one frame");
  }
  const std::size_t count = 1 + (clip.samples.size() - frame) / hop;
  std::vector<double> energies(count);
  for (std::size_t f = 0; f < count; ++f) {
    double sum = 0.0;
    for (std::size_t i = f * hop; i < f * hop + frame; ++i) sum += clip.samples[i] * clip.samples[i];
    energies[f] = sum / static_cast<double>(frame);
  }
  return energies;
}

double nearest_rank_percentile(std::span<const double> values, std::uint32_t percent) {
  if (values.empty()) throw Error(ErrorCode::kBadConfig, "percentile of an empty sequence");
  if (percent > 100) throw Error(ErrorCode::kBadConfig, "percentile above 100");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t rank = std::max<std::size_t>(1, (percent * sorted.size() + 99) / 100);
  return sorted[rank - 1];
}

SnrReport estimate_snr(const PcmClip& clip, double threshold_db) {
  if (clip.sample_rate > 0 &&
      clip.samples.size() * 1000 < static_cast<std::size_t>(clip.sample_rate) * kMinClipMs) {
    throw Error(ErrorCode::kTooShort, "clip shorter than 100 ms");
  }
  const auto energies = frame_energies(clip);
  SnrReport report;
  report.noise_floor = nearest_rank_percentile(energies, kNoisePercentile);
  report.speech_level = nearest_rank_percentile(energies, kSpeechPercentile);
  const double ratio = report.speech_level / std::max(report.noise_floor, kNoiseFloorEnergy);
  // log10(0) is -inf; the clamp maps it to 0.
  report.snr_db = ratio > 0.0 ? std::clamp(10.0 * std::log10(ratio), 0.0, kMaxSnrDb) : 0.0;
  report.threshold_db = threshold_db;
  report.accepted = report.snr_db >= threshold_db;
  return report;
}

nlohmann::json snr_report_to_json(const SnrReport& r) {
  return {{"snr_db", r.snr_db},
          {"noise_floor", r.noise_floor},
          {"speech_level", r.speech_level},
          {"accepted", r.accepted},
          {"threshold_db", r.threshold_db}};
}

nlohmann::json gate_constants_json() {
  return {{"version", kGateConstantsVersion},
          {"frame_ms", kFrameMs},
          {"hop_ms", kHopMs},
          {"min_clip_ms", kMinClipMs},
          {"noise_percentile", kNoisePercentile},
          {"speech_percentile", kSpeechPercentile},
          {"noise_floor_energy", kNoiseFloorEnergy},
          {"max_snr_db", kMaxSnrDb},
          {"threshold_db", kDefaultGateThresholdDb},
          {"percentile_method", "nearest-rank"},
          {"sample_scale", 32768}};
}

}  // namespace phonoloop
