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

#include "phonoloop/audio/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

#include "phonoloop/error.hpp"

namespace phonoloop {

namespace {

std::uint32_t read_u32(std::string_view b, std::size_t at) {
  return static_cast<std::uint32_t>(static_cast<unsigned char>(b[at])) |
         static_cast<std::uint32_t>(static_cast<unsigned char>(b[at + 1])) << 8 |
         static_cast<std::uint32_t>(static_cast<unsigned char>(b[at + 2])) << 16 |
         static_cast<std::uint32_t>(static_cast<unsigned char>(b[at + 3])) << 24;
}

std::uint16_t read_u16(std::string_view b, std::size_t at) {
  return static_cast<std::uint16_t>(static_cast<unsigned char>(b[at]) |
                                    static_cast<unsigned char>(b[at + 1]) << 8);
}

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>(v >> 8));
}

[[noreturn]] void unsupported(const std::string& why) { throw Error(ErrorCode::kUnsupportedFormat, why); }

}  // namespace

PcmClip parse_wav(std::string_view bytes) {
  if (bytes.size() < 12 || bytes.substr(0, 4) != "RIFF" || bytes.substr(8, 4) != "WAVE") {
    unsupported("not a RIFF/WAVE file");
  }
  bool have_fmt = false;
  PcmClip clip;
  std::size_t at = 12;
  while (at + 8 <= bytes.size()) {
    const auto id = bytes.substr(at, 4);
    const std::size_t size = read_u32(bytes, at + 4);
    const std::size_t body = at + 8;
    if (size > bytes.size() - body) unsupported("truncated chunk");
    if (id == "fmt ") {
      if (size < 16) unsupported("short fmt chunk");
      const auto format = read_u16(bytes, body);
      const auto channels = read_u16(bytes, body + 2);
      const auto rate = read_u32(bytes, body + 4);
      const auto bits = read_u16(bytes, body + 14);
      if (format != 1) unsupported("encoding " + std::to_string(format) + " is not PCM");
      if (channels != 1) unsupported(std::to_string(channels) + " channels, expected mono");
      if (bits != 16) unsupported(std::to_string(bits) + "-bit samples, expected 16");
      if (rate == 0) unsupported("zero sample rate");
      clip.sample_rate = rate;
      have_fmt = true;
    } else if (id == "data") {
      if (!have_fmt) unsupported("data chunk before fmt chunk");
      const std::size_t n = size / 2;
      clip.samples.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        const auto raw = static_cast<std::int16_t>(read_u16(bytes, body + 2 * i));
        clip.samples[i] = static_cast<double>(raw) / 32768.0;
      }
      return clip;
    }
    at = body + size + (size & 1);
  }
  unsupported("missing fmt or data chunk");
}

PcmClip load_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_wav(bytes);
}

std::string encode_wav(const PcmClip& clip) {
  const auto data_size = static_cast<std::uint32_t>(clip.samples.size() * 2);
  std::string out;
  out.reserve(44 + data_size);
  out += "RIFF";
  put_u32(out, 36 + data_size);
  out += "WAVEfmt ";
  put_u32(out, 16);
  put_u16(out, 1);
  put_u16(out, 1);
  put_u32(out, clip.sample_rate);
  put_u32(out, clip.sample_rate * 2);
  put_u16(out, 2);
  put_u16(out, 16);
  out += "data";
  put_u32(out, data_size);
  for (double s : clip.samples) {
    const double scaled = std::clamp(std::nearbyint(s * 32768.0), -32768.0, 32767.0);
    put_u16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(scaled)));
  }
  return out;
}

}  // namespace phonoloop
