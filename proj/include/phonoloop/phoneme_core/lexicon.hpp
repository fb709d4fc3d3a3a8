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

#include <filesystem>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "phonoloop/phoneme_core/inventory.hpp"

namespace phonoloop {

struct LexiconEntry {
  std::string word;
  Pronunciation pron;
  double weight = 1.0;
  // Template slot category ("noun", "verb", ...); empty when untagged.
  std::string category;

  bool operator==(const LexiconEntry&) const = default;
};

// Lowercase ASCII folding used for every lexicon lookup.
std::string fold_case(std::string_view word);

// Orthographic words mapped to pronunciations over a fixed inventory. Lookup
// is case-folded; entries keep their original spelling and file order.
class Lexicon {
 public:
  Lexicon() = default;
  Lexicon(PhonemeInventory inventory, std::vector<LexiconEntry> entries);

  // Lines are `word<TAB>phonemes[<TAB>weight[<TAB>category]]`; '#' lines
  // are comments.
  static Lexicon parse(std::istream& in, const PhonemeInventory& inventory);
  // Without an inventory the symbols are collected in order of first use.
  static Lexicon parse(std::istream& in);
  static Lexicon load(const std::filesystem::path& lexicon_path,
                      const std::optional<std::filesystem::path>& inventory_path = std::nullopt);

  const PhonemeInventory& inventory() const noexcept { return inventory_; }
  std::span<const LexiconEntry> entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

  const LexiconEntry* find(std::string_view word) const;
  const LexiconEntry& at(std::string_view word) const;
  bool contains(std::string_view word) const { return find(word) != nullptr; }

  // Appends a new entry; throws BadConfig if the word already exists.
  void add(LexiconEntry entry);

  // Copy restricted to the entries accepted by `keep`, same inventory.
  template <class Pred>
  Lexicon filtered(Pred keep) const {
    std::vector<LexiconEntry> kept;
    for (const auto& e : entries_) {
      if (keep(e)) kept.push_back(e);
    }
    return Lexicon(inventory_, std::move(kept));
  }

  bool operator==(const Lexicon& other) const {
    return inventory_ == other.inventory_ && entries_ == other.entries_;
  }

 private:
  void validate(const LexiconEntry& entry) const;

  PhonemeInventory inventory_;
  std::vector<LexiconEntry> entries_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Stored pronunciation of `word`; throws UnknownWord.
const Pronunciation& phonemes_of(std::string_view word, const Lexicon& lexicon);

}  // namespace phonoloop
