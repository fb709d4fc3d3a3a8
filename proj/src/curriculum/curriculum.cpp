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

#include "phonoloop/curriculum/curriculum.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include <boost/random/uniform_int_distribution.hpp>
#include <httplib.h>

#include "phonoloop/error.hpp"
#include "phonoloop/phoneme_core/alignment.hpp"
#include "phonoloop/random.hpp"
#include "phonoloop/recognizer/external.hpp"

namespace phonoloop {

namespace {

constexpr std::uint64_t kRandomPromptTag = 0x5a3d1e0f00000010ULL;

std::vector<std::string> target_symbols(const Lexicon& lexicon, std::span<const Phoneme> targets) {
  std::vector<std::string> out;
  for (auto p : targets) out.push_back(lexicon.inventory().symbol(p));
  return out;
}

bool contains_any(const Pronunciation& pron, std::span<const Phoneme> targets) {
  return std::any_of(pron.begin(), pron.end(),
                     [&](Phoneme p) { return std::find(targets.begin(), targets.end(), p) != targets.end(); });
}

// Targets present in the prompt, in target order.
std::vector<std::string> rationale(const std::vector<std::string>& words, const Lexicon& lexicon,
                                   std::span<const Phoneme> targets) {
  std::vector<std::string> out;
  for (auto t : targets) {
    const bool present = std::any_of(words.begin(), words.end(), [&](const std::string& w) {
      const auto* e = lexicon.find(w);
      return e != nullptr && std::find(e->pron.begin(), e->pron.end(), t) != e->pron.end();
    });
    if (present) out.push_back(lexicon.inventory().symbol(t));
  }
  return out;
}

std::string strip_punctuation(std::string_view token) {
  while (!token.empty() && std::ispunct(static_cast<unsigned char>(token.back()))) token.remove_suffix(1);
  while (!token.empty() && std::ispunct(static_cast<unsigned char>(token.front()))) token.remove_prefix(1);
  return std::string(token);
}

// Canonical spellings when the sentence is acceptable, empty otherwise.
std::vector<std::string> validate_generated(const std::string& sentence, const Lexicon& lexicon,
                                            const std::vector<std::string>& seed_words) {
  std::vector<std::string> words;
  bool has_seed = false;
  for (const auto& raw : split_words(sentence)) {
    const auto token = strip_punctuation(raw);
    if (token.empty()) continue;
    const auto* entry = lexicon.find(token);
    if (entry == nullptr) return {};
    has_seed = has_seed || std::any_of(seed_words.begin(), seed_words.end(), [&](const std::string& s) {
                 return fold_case(s) == fold_case(entry->word);
               });
    words.push_back(entry->word);
  }
  if (!has_seed || words.empty()) return {};
  return words;
}

struct CategoryPools {
  std::vector<std::string> primary;
  std::vector<std::string> secondary;
  std::size_t primary_cursor = 0;
  std::size_t secondary_cursor = 0;
};

bool take_from(const std::vector<std::string>& pool, std::size_t& cursor, std::vector<std::string>& used,
               std::string& out) {
  for (std::size_t tries = 0; tries < pool.size(); ++tries) {
    const auto& candidate = pool[cursor % pool.size()];
    ++cursor;
    if (std::find(used.begin(), used.end(), candidate) == used.end()) {
      out = candidate;
      return true;
    }
  }
  return false;
}

std::optional<std::vector<std::string>> fill_template(const SentenceTemplate& tmpl, const Lexicon& lexicon,
                                                      std::map<std::string, CategoryPools>& pools) {
  auto trial = pools;
  std::vector<std::string> words;
  for (const auto& token : tmpl.tokens) {
    if (!token.open) {
      const auto* entry = lexicon.find(token.text);
      if (entry == nullptr) return std::nullopt;
      words.push_back(entry->word);
      continue;
    }
    auto it = trial.find(token.text);
    if (it == trial.end()) return std::nullopt;
    std::string chosen;
    if (!take_from(it->second.primary, it->second.primary_cursor, words, chosen) &&
        !take_from(it->second.secondary, it->second.secondary_cursor, words, chosen)) {
      return std::nullopt;
    }
    words.push_back(std::move(chosen));
  }
  pools = std::move(trial);
  return words;
}

}  // namespace

std::size_t PromptPlan::word_count() const {
  std::size_t n = 0;
  for (const auto& p : prompts) n += p.words.size();
  return n;
}

SentenceTemplate SentenceTemplate::parse(std::string_view line) {
  SentenceTemplate t;
  bool any_open = false;
  for (const auto& tok : split_words(line)) {
    if (tok.size() >= 3 && tok.front() == '<' && tok.back() == '>') {
      t.tokens.push_back({tok.substr(1, tok.size() - 2), true});
      any_open = true;
    } else {
      t.tokens.push_back({tok, false});
    }
  }
  if (t.tokens.size() < kMinSentenceWords || t.tokens.size() > kMaxSentenceWords) {
    throw Error(ErrorCode::kParseError, "template must have 5-8 tokens: '" + std::string(line) + "'");
  }
  if (!any_open) throw Error(ErrorCode::kParseError, "template has no open slot: '" + std::string(line) + "'");
  return t;
}

std::string SentenceTemplate::to_string() const {
  std::string out;
  for (const auto& tok : tokens) {
    if (!out.empty()) out += ' ';
    out += tok.open ? "<" + tok.text + ">" : tok.text;
  }
  return out;
}

std::vector<SentenceTemplate> parse_templates(std::istream& in) {
  std::vector<SentenceTemplate> out;
  std::string line;
  while (std::getline(in, line)) {
    const auto words = split_words(line);
    if (words.empty() || words.front().front() == '#') continue;
    out.push_back(SentenceTemplate::parse(line));
  }
  return out;
}

std::vector<SentenceTemplate> load_templates(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open templates " + path.string());
  return parse_templates(in);
}

PromptPlan cold_start_plan(const Lexicon& lexicon, std::size_t budget) {
  const auto cover = greedy_biphone_cover(lexicon, budget, 1.0);
  PromptPlan plan;
  for (std::size_t i = 0; i < cover.chosen.size(); i += kMaxPromptWords) {
    const auto end = std::min(cover.chosen.size(), i + kMaxPromptWords);
    plan.prompts.push_back({{cover.chosen.begin() + static_cast<std::ptrdiff_t>(i),
                             cover.chosen.begin() + static_cast<std::ptrdiff_t>(end)},
                            {}});
  }
  return plan;
}

std::vector<WordScore> score_words(const Lexicon& lexicon, const PhonemeDifficulty& difficulty) {
  std::vector<WordScore> out;
  out.reserve(lexicon.size());
  for (const auto& e : lexicon.entries()) {
    double sum = 0.0;
    for (auto p : e.pron) sum += difficulty.score(p);
    out.push_back({e.word, sum / static_cast<double>(e.pron.size())});
  }
  std::sort(out.begin(), out.end(), [](const WordScore& a, const WordScore& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.word < b.word;
  });
  return out;
}

HttpTextGenerator::HttpTextGenerator(std::string endpoint, std::chrono::milliseconds timeout)
    : endpoint_(std::move(endpoint)), timeout_(timeout) {}

std::vector<std::string> HttpTextGenerator::generate(const GenerationRequest& request) {
  const auto ep = split_endpoint(endpoint_);
  httplib::Client client(ep.origin);
  client.set_connection_timeout(timeout_);
  client.set_read_timeout(timeout_);
  const nlohmann::json body = {
      {"seed_words", request.seed_words}, {"target_phonemes", request.target_phonemes}, {"n", request.n}};
  auto res = client.Post(ep.path, body.dump(), "application/json");
  if (!res) throw Error(ErrorCode::kTransport, endpoint_ + ": " + httplib::to_string(res.error()));
  if (res->status != 200) throw Error(ErrorCode::kTransport, endpoint_ + ": HTTP " + std::to_string(res->status));
  try {
    return nlohmann::json::parse(res->body).at("sentences").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kProtocolViolation, std::string("generator response: ") + e.what());
  }
}

PromptPlan rechain_sentences(std::span<const WordScore> ranked, const Lexicon& lexicon,
                             std::span<const SentenceTemplate> templates, std::size_t n_sentences,
                             const RechainOptions& options) {
  PromptPlan plan;
  if (n_sentences == 0) return plan;
  const std::span<const Phoneme> targets(options.target_phonemes);

  if (options.generator != nullptr) {
    GenerationRequest request;
    for (const auto& w : ranked) {
      if (request.seed_words.size() >= options.seed_word_count) break;
      if (lexicon.contains(w.word)) request.seed_words.push_back(w.word);
    }
    request.target_phonemes = target_symbols(lexicon, targets);
    request.n = n_sentences;
    std::vector<std::string> sentences;
    try {
      sentences = options.generator->generate(request);
    } catch (const Error&) {
      sentences.clear();
    }
    for (const auto& s : sentences) {
      if (plan.prompts.size() >= n_sentences) break;
      auto words = validate_generated(s, lexicon, request.seed_words);
      if (words.empty()) continue;
      auto why = rationale(words, lexicon, targets);
      plan.prompts.push_back({std::move(words), std::move(why)});
    }
  }
  if (plan.prompts.size() >= n_sentences) return plan;

  std::map<std::string, CategoryPools> pools;
  for (const auto& w : ranked) {
    const auto* entry = lexicon.find(w.word);
    if (entry == nullptr || entry->category.empty()) continue;
    auto& pool = pools[entry->category];
    if (targets.empty() || contains_any(entry->pron, targets)) {
      pool.primary.push_back(entry->word);
    } else {
      pool.secondary.push_back(entry->word);
    }
  }

  for (std::size_t i = 0; plan.prompts.size() < n_sentences; ++i) {
    std::optional<std::vector<std::string>> words;
    for (std::size_t t = 0; t < templates.size() && !words; ++t) {
      words = fill_template(templates[(i + t) % templates.size()], lexicon, pools);
    }
    if (!words) {
      throw Error(ErrorCode::kNoFillableTemplate, "no template slot matches the ranked words");
    }
    auto why = rationale(*words, lexicon, targets);
    plan.prompts.push_back({std::move(*words), std::move(why)});
  }
  return plan;
}

std::string_view strategy_name(Strategy strategy) {
  switch (strategy) {
    case Strategy::kUncertainty: return "uncertainty";
    case Strategy::kRandom: return "random";
    case Strategy::kCoverageOnly: return "coverage";
  }
  return "uncertainty";
}

Strategy strategy_from_name(std::string_view name) {
  if (name == "uncertainty") return Strategy::kUncertainty;
  if (name == "random") return Strategy::kRandom;
  if (name == "coverage") return Strategy::kCoverageOnly;
  throw Error(ErrorCode::kBadConfig, "unknown strategy '" + std::string(name) + "'");
}

PromptPlan select_next_prompts(const CurriculumContext& context, std::size_t n, Strategy strategy,
                               std::uint64_t nonce) {
  PromptPlan plan;
  if (n == 0) return plan;
  if (context.training == nullptr || context.training->empty()) {
    throw Error(ErrorCode::kBadConfig, "no training words available");
  }
  const Lexicon& training = *context.training;

  switch (strategy) {
    case Strategy::kUncertainty: {
      if (!context.cold_start_complete) throw Error(ErrorCode::kColdStartIncomplete, "cold start not finished");
      const auto difficulty = phoneme_difficulty_score(*context.model, context.difficulty_lambda);
      const auto ranked = score_words(training, difficulty);
      auto order = difficulty.ranked();
      order.resize(std::min(order.size(), kTargetPhonemeCount));
      RechainOptions options;
      options.target_phonemes = std::move(order);
      options.generator = context.generator;
      return rechain_sentences(ranked, training, context.templates, n, options);
    }
    case Strategy::kRandom: {
      Rng rng = make_rng(nonce, kRandomPromptTag);
      const std::size_t size = training.size();
      std::vector<std::size_t> indices(size);
      if (!context.templates.empty()) {
        std::iota(indices.begin(), indices.end(), 0);
        for (std::size_t k = 0; k + 1 < size; ++k) {
          std::swap(indices[k], indices[boost::random::uniform_int_distribution<std::size_t>(k, size - 1)(rng)]);
        }
        std::vector<WordScore> shuffled;
        for (auto i : indices) shuffled.push_back({training.entries()[i].word, 0.0});
        try {
          return rechain_sentences(shuffled, training, context.templates, n, RechainOptions{});
        } catch (const Error& e) {
          if (e.code() != ErrorCode::kNoFillableTemplate) throw;
        }
      }
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t len = std::min(
            size, boost::random::uniform_int_distribution<std::size_t>(kMinSentenceWords, kMaxSentenceWords)(rng));
        std::iota(indices.begin(), indices.end(), 0);
        Prompt prompt;
        for (std::size_t k = 0; k < len; ++k) {
          const auto j = boost::random::uniform_int_distribution<std::size_t>(k, size - 1)(rng);
          std::swap(indices[k], indices[j]);
          prompt.words.push_back(training.entries()[indices[k]].word);
        }
        plan.prompts.push_back(std::move(prompt));
      }
      return plan;
    }
    case Strategy::kCoverageOnly: {
      const auto order = greedy_coverage_order(training);
      std::size_t cursor = context.coverage_cursor;
      for (std::size_t i = 0; i < n; ++i) {
        Prompt prompt;
        for (std::size_t k = 0; k < std::min(kMaxPromptWords, order.size()); ++k) {
          prompt.words.push_back(order[cursor % order.size()]);
          ++cursor;
        }
        plan.prompts.push_back(std::move(prompt));
      }
      return plan;
    }
  }
  return plan;
}

nlohmann::json plan_to_json(const PromptPlan& plan) {
  nlohmann::json prompts = nlohmann::json::array();
  for (const auto& p : plan.prompts) {
    prompts.push_back({{"words", p.words}, {"target_phonemes", p.target_phonemes}});
  }
  return {{"round", plan.round}, {"prompts", std::move(prompts)}};
}

PromptPlan plan_from_json(const nlohmann::json& j) {
  try {
    PromptPlan plan;
    plan.round = j.value("round", std::size_t{0});
    for (const auto& p : j.at("prompts")) {
      plan.prompts.push_back({p.at("words").get<std::vector<std::string>>(),
                              p.value("target_phonemes", std::vector<std::string>{})});
    }
    return plan;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("prompt plan: ") + e.what());
  }
}

}  // namespace phonoloop
