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

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "phonoloop/phoneme_core/coverage.hpp"
#include "phonoloop/recognizer/model.hpp"
#include "phonoloop/uncertainty/uncertainty.hpp"

namespace phonoloop {

inline constexpr std::size_t kMaxPromptWords = 8;
inline constexpr std::size_t kMinSentenceWords = 5;
inline constexpr std::size_t kMaxSentenceWords = 8;
inline constexpr std::size_t kTargetPhonemeCount = 3;

struct Prompt {
  std::vector<std::string> words;
  std::vector<std::string> target_phonemes;

  bool operator==(const Prompt&) const = default;
};

struct PromptPlan {
  std::size_t round = 0;
  std::vector<Prompt> prompts;

  std::size_t word_count() const;
  bool operator==(const PromptPlan&) const = default;
};

// A sentence pattern such as "the <noun> sees the <noun>".
struct SentenceTemplate {
  struct Token {
    std::string text;  // literal word, or the category of an open slot
    bool open = false;

    bool operator==(const Token&) const = default;
  };
  std::vector<Token> tokens;

  // Throws ParseError for patterns outside 5-8 tokens or without a slot.
  static SentenceTemplate parse(std::string_view line);
  std::string to_string() const;
  bool operator==(const SentenceTemplate&) const = default;
};

std::vector<SentenceTemplate> parse_templates(std::istream& in);
std::vector<SentenceTemplate> load_templates(const std::filesystem::path& path);

// Greedy biphone cover chunked into prompts of at most eight words.
PromptPlan cold_start_plan(const Lexicon& lexicon, std::size_t budget = kDefaultCoverageBudget);

struct WordScore {
  std::string word;
  double score = 0.0;

  bool operator==(const WordScore&) const = default;
};

// Mean phd over each pronunciation; descending, ties by word.
std::vector<WordScore> score_words(const Lexicon& lexicon, const PhonemeDifficulty& difficulty);

struct GenerationRequest {
  std::vector<std::string> seed_words;
  std::vector<std::string> target_phonemes;
  std::size_t n = 0;
};

// Optional sentence source for re-chaining; output is validated before use.
class TextGenerator {
 public:
  virtual ~TextGenerator() = default;
  virtual std::vector<std::string> generate(const GenerationRequest& request) = 0;
};

// POST {"seed_words", "target_phonemes", "n"} -> {"sentences": [str]}.
class HttpTextGenerator final : public TextGenerator {
 public:
  explicit HttpTextGenerator(std::string endpoint,
                             std::chrono::milliseconds timeout = std::chrono::seconds(10));
  std::vector<std::string> generate(const GenerationRequest& request) override;

 private:
  std::string endpoint_;
  std::chrono::milliseconds timeout_;
};

struct RechainOptions {
  // When non-empty, slots draw first from words containing one of these.
  std::vector<Phoneme> target_phonemes;
  TextGenerator* generator = nullptr;
  std::size_t seed_word_count = 10;
};

// Fills templates with the best-ranked compatible words, rotating through
// each category so consecutive sentences differ; a word appears at most once
// per sentence. Generator output is used only when every token resolves in
// the lexicon and at least one seed word appears. Throws NoFillableTemplate.
PromptPlan rechain_sentences(std::span<const WordScore> ranked, const Lexicon& lexicon,
                             std::span<const SentenceTemplate> templates, std::size_t n_sentences,
                             const RechainOptions& options = {});

enum class Strategy { kUncertainty, kRandom, kCoverageOnly };

std::string_view strategy_name(Strategy strategy);
Strategy strategy_from_name(std::string_view name);

// Everything prompt selection reads from a profile.
struct CurriculumContext {
  const Lexicon* training = nullptr;  // words eligible for prompts
  const AdaptiveModel* model = nullptr;
  std::span<const SentenceTemplate> templates;
  bool cold_start_complete = false;
  std::size_t coverage_cursor = 0;  // words already issued by CoverageOnly
  TextGenerator* generator = nullptr;
  double difficulty_lambda = kDefaultDifficultyLambda;
};

// Uncertainty re-chains from the phoneme difficulty table. Random fills the
// templates from a shuffled word order, or samples 5-8 training words per
// prompt when no template fits. CoverageOnly continues the greedy coverage
// order. Pure in (context, n, strategy, nonce). Throws ColdStartIncomplete.
PromptPlan select_next_prompts(const CurriculumContext& context, std::size_t n, Strategy strategy,
                               std::uint64_t nonce);

nlohmann::json plan_to_json(const PromptPlan& plan);
PromptPlan plan_from_json(const nlohmann::json& j);

}  // namespace phonoloop
