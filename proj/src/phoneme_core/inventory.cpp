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

#include "phonoloop/phoneme_core/inventory.hpp"

#include <cctype>
#include <fstream>
#include <limits>
#include <sstream>

#include "phonoloop/error.hpp"

namespace phonoloop {

namespace {

bool has_whitespace(std::string_view s) {
  for (unsigned char c : s) {
    if (std::isspace(c)) return true;
  }
  return false;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

PhonemeInventory::PhonemeInventory(std::vector<std::string> symbols) : symbols_(std::move(symbols)) {
  if (symbols_.size() > std::numeric_limits<std::uint16_t>::max()) {
    throw Error(ErrorCode::kParseError, "phoneme inventory too large");
  }
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    const auto& s = symbols_[i];
    if (s.empty() || has_whitespace(s)) {
      throw Error(ErrorCode::kParseError, "invalid phoneme symbol '" + s + "'");
    }
    if (!index_.emplace(s, Phoneme{static_cast<std::uint16_t>(i)}).second) {
      throw Error(ErrorCode::kParseError, "duplicate phoneme symbol '" + s + "'");
    }
  }
}

PhonemeInventory PhonemeInventory::parse(std::istream& in) {
  std::vector<std::string> symbols;
  std::string line;
  while (std::getline(in, line)) {
    auto s = trim(line);
    if (s.empty() || s.front() == '#') continue;
    symbols.emplace_back(s);
  }
  return PhonemeInventory(std::move(symbols));
}

PhonemeInventory PhonemeInventory::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open inventory " + path.string());
  return parse(in);
}

std::optional<Phoneme> PhonemeInventory::find(std::string_view symbol) const {
  auto it = index_.find(std::string(symbol));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Phoneme PhonemeInventory::at(std::string_view symbol) const {
  if (auto p = find(symbol)) return *p;
  throw Error(ErrorCode::kParseError, "phoneme '" + std::string(symbol) + "' not in inventory");
}

Pronunciation PhonemeInventory::parse_pronunciation(std::string_view text) const {
  Pronunciation pron;
  std::istringstream in{std::string(text)};
  std::string token;
  while (in >> token) pron.push_back(at(token));
  return pron;
}

std::string PhonemeInventory::format(const Pronunciation& pron) const {
  std::string out;
  for (std::size_t i = 0; i < pron.size(); ++i) {
    if (i > 0) out += ' ';
    out += symbol(pron[i]);
  }
  return out;
}

}  // namespace phonoloop
