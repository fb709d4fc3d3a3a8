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

#include "phonoloop/phoneme_core/lexicon.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "phonoloop/error.hpp"

namespace phonoloop {

namespace {

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return fields;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

struct RawEntry {
  std::string word;
  std::vector<std::string> symbols;
  double weight = 1.0;
  std::string category;
};

std::vector<RawEntry> parse_raw(std::istream& in) {
  std::vector<RawEntry> raw;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty() || trim(line).front() == '#') continue;
    const auto fields = split_tabs(line);
    auto where = [&] { return "lexicon line " + std::to_string(line_no); };
    if (fields.size() < 2 || fields.size() > 4) {
      throw Error(ErrorCode::kParseError, where() + ": expected 2-4 tab-separated fields");
    }
    RawEntry entry;
    entry.word = std::string(trim(fields[0]));
    std::istringstream phones{std::string(fields[1])};
    std::string sym;
    while (phones >> sym) entry.symbols.push_back(sym);
    if (fields.size() >= 3 && !trim(fields[2]).empty()) {
      const auto text = trim(fields[2]);
      auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), entry.weight);
      if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw Error(ErrorCode::kParseError, where() + ": bad weight '" + std::string(text) + "'");
      }
    }
    if (fields.size() == 4) entry.category = std::string(trim(fields[3]));
    raw.push_back(std::move(entry));
  }
  return raw;
}

Lexicon build(const std::vector<RawEntry>& raw, const PhonemeInventory& inventory) {
  std::vector<LexiconEntry> entries;
  entries.reserve(raw.size());
  for (const auto& r : raw) {
    LexiconEntry e{r.word, {}, r.weight, r.category};
    for (const auto& s : r.symbols) e.pron.push_back(inventory.at(s));
    entries.push_back(std::move(e));
  }
  return Lexicon(inventory, std::move(entries));
}

}  // namespace

std::string fold_case(std::string_view word) {
  std::string out(word);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

Lexicon::Lexicon(PhonemeInventory inventory, std::vector<LexiconEntry> entries)
    : inventory_(std::move(inventory)) {
  entries_.reserve(entries.size());
  for (auto& e : entries) add(std::move(e));
}

void Lexicon::validate(const LexiconEntry& entry) const {
  if (entry.word.empty()) throw Error(ErrorCode::kParseError, "empty lexicon word");
  for (unsigned char c : entry.word) {
    if (std::isspace(c)) throw Error(ErrorCode::kParseError, "whitespace in word '" + entry.word + "'");
  }
  if (entry.pron.empty()) {
    throw Error(ErrorCode::kParseError, "empty pronunciation for '" + entry.word + "'");
  }
  for (auto p : entry.pron) {
    if (p.index() >= inventory_.size()) {
      throw Error(ErrorCode::kParseError, "phoneme id out of inventory in '" + entry.word + "'");
    }
  }
  if (!(entry.weight >= 0.0) || !std::isfinite(entry.weight)) {
    throw Error(ErrorCode::kParseError, "negative weight for '" + entry.word + "'");
  }
}

void Lexicon::add(LexiconEntry entry) {
  validate(entry);
  auto key = fold_case(entry.word);
  if (index_.count(key) != 0) {
    throw Error(ErrorCode::kBadConfig, "duplicate lexicon word '" + entry.word + "'");
  }
  index_.emplace(std::move(key), entries_.size());
  entries_.push_back(std::move(entry));
}

Lexicon Lexicon::parse(std::istream& in, const PhonemeInventory& inventory) {
  return build(parse_raw(in), inventory);
}

Lexicon Lexicon::parse(std::istream& in) {
  const auto raw = parse_raw(in);
  std::vector<std::string> symbols;
  std::unordered_map<std::string, bool> seen;
  for (const auto& r : raw) {
    for (const auto& s : r.symbols) {
      if (seen.emplace(s, true).second) symbols.push_back(s);
    }
  }
  return build(raw, PhonemeInventory(std::move(symbols)));
}

Lexicon Lexicon::load(const std::filesystem::path& lexicon_path,
                      const std::optional<std::filesystem::path>& inventory_path) {
  std::ifstream in(lexicon_path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open lexicon " + lexicon_path.string());
  if (inventory_path) return parse(in, PhonemeInventory::load(*inventory_path));
  return parse(in);
}

const LexiconEntry* Lexicon::find(std::string_view word) const {
  auto it = index_.find(fold_case(word));
  return it == index_.end() ? nullptr : &entries_[it->second];
}

const LexiconEntry& Lexicon::at(std::string_view word) const {
  if (const auto* e = find(word)) return *e;
  throw Error(ErrorCode::kUnknownWord, std::string(word));
}

const Pronunciation& phonemes_of(std::string_view word, const Lexicon& lexicon) {
  return lexicon.at(word).pron;
}

}  // namespace phonoloop
