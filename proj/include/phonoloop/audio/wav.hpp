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
#include <string>
#include <string_view>
#include <vector>

namespace phonoloop {

struct PcmClip {
  std::vector<double> samples;  // in [-1, 1]
  std::uint32_t sample_rate = 16000;

  double duration_seconds() const noexcept {
    return static_cast<double>(samples.size()) / static_cast<double>(sample_rate);
  }
  bool operator==(const PcmClip&) const = default;
};

// RIFF/WAVE, PCM 16-bit little-endian, mono. Anything else throws
// UnsupportedFormat. Samples are normalized as value / 32768.
PcmClip parse_wav(std::string_view bytes);
PcmClip load_wav(const std::filesystem::path& path);

// Round-to-nearest 16-bit encoding with saturation.
std::string encode_wav(const PcmClip& clip);

}  // namespace phonoloop
