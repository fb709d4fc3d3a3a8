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

#include <compare>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace phonoloop {

// Dense id of a phoneme within its inventory.
struct Phoneme {
  std::uint16_t id = 0;

  std::size_t index() const noexcept { return id; }
  friend constexpr auto operator<=>(Phoneme, Phoneme) = default;
};

using Pronunciation = std::vector<Phoneme>;

// Ordered set of phoneme symbols; ids are 0..size()-1 in insertion order.
class PhonemeInventory {
 public:
  PhonemeInventory() = default;
  explicit PhonemeInventory(std::vector<std::string> symbols);

  // One symbol per line; blank lines and '#' comments are skipped.
  static PhonemeInventory parse(std::istream& in);
  static PhonemeInventory load(const std::filesystem::path& path);

  std::size_t size() const noexcept { return symbols_.size(); }
  bool empty() const noexcept { return symbols_.empty(); }
  const std::vector<std::string>& symbols() const noexcept { return symbols_; }
  const std::string& symbol(Phoneme p) const { return symbols_.at(p.index()); }

  std::optional<Phoneme> find(std::string_view symbol) const;
  // Throws ParseError for symbols outside the inventory.
  Phoneme at(std::string_view symbol) const;

  // Whitespace-separated symbols to a pronunciation and back.
  Pronunciation parse_pronunciation(std::string_view text) const;
  std::string format(const Pronunciation& pron) const;

  bool operator==(const PhonemeInventory& other) const { return symbols_ == other.symbols_; }

 private:
  std::vector<std::string> symbols_;
  std::unordered_map<std::string, Phoneme> index_;
};

}  // namespace phonoloop
