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

#include <doctest.h>

#include <set>

#include "oracles.hpp"
#include "phonoloop/curriculum/curriculum.hpp"
#include "support.hpp"

using namespace phonoloop;
using namespace phonoloop::testing;

namespace {

const char* kNouns =
    "the\tdh ax\t1\n"
    "sees\ts iy z\t1\n"
    "bab\tb a b\t1\tnoun\n"
    "bob\tb o b\t1\tnoun\n"
    "cat\tk a t\t1\tnoun\n"
    "dog\td o g\t1\tnoun\n"
    "tip\tt i p\t1\tnoun\n"
    "pelican\tp e l i k a n\t1\tnoun\n"
    "boat\tb o t\t1\tnoun\n";

std::vector<SentenceTemplate> templates_from(const std::string& text) {
  std::istringstream in(text);
  return parse_templates(in);
}

// Every row mastered except `hard`; "s" and "z" trail so they fill the
// remaining target places without appearing in any noun.
AdaptiveModel model_hard_on(const Lexicon& lex, const std::string& hard) {
  AdaptiveModel model(lex.inventory());
  for (std::size_t p = 0; p < lex.inventory().size(); ++p) {
    const auto& sym = lex.inventory().symbols()[p];
    if (sym == hard) continue;
    const double amount = (sym == "s" || sym == "z") ? 1e3 : 1e6;
    model.add_count(Phoneme{static_cast<std::uint16_t>(p)}, Phoneme{static_cast<std::uint16_t>(p)}, amount);
  }
  return model;
}

class FixedGenerator final : public TextGenerator {
 public:
  explicit FixedGenerator(std::vector<std::string> sentences) : sentences_(std::move(sentences)) {}
  std::vector<std::string> generate(const GenerationRequest& request) override {
    last = request;
    return sentences_;
  }
  GenerationRequest last;

 private:
  std::vector<std::string> sentences_;
};

std::size_t phoneme_count(const PromptPlan& plan, const Lexicon& lex, Phoneme target) {
  std::size_t n = 0;
  for (const auto& p : plan.prompts) {
    for (const auto& w : p.words) {
      const auto& pron = lex.at(w).pron;
      n += static_cast<std::size_t>(std::count(pron.begin(), pron.end(), target));
    }
  }
  return n;
}

}  // namespace

TEST_CASE("template parsing") {
  const auto t = SentenceTemplate::parse("the <noun> sees the <noun>");
  REQUIRE(t.tokens.size() == 5);
  CHECK(t.tokens[1] == SentenceTemplate::Token{"noun", true});
  CHECK(t.tokens[0] == SentenceTemplate::Token{"the", false});
  CHECK(t.to_string() == "the <noun> sees the <noun>");
  CHECK(error_of([] { SentenceTemplate::parse("the <noun> sees"); }) == ErrorCode::kParseError);
  CHECK(error_of([] { SentenceTemplate::parse("a b c d e f g h i"); }) == ErrorCode::kParseError);
  CHECK(error_of([] { SentenceTemplate::parse("the cat sees the dog"); }) == ErrorCode::kParseError);
  CHECK(templates_from("# comment\n\nthe <noun> sees the <noun>\n").size() == 1);
  CHECK(error_of([] { load_templates("/nonexistent/templates.txt"); }) == ErrorCode::kIoError);
}

TEST_CASE("cold_start_plan") {
  const auto toy = lexicon_from("aba\ta b a\nbab\tb a b\nac\ta c\n");
  auto plan = cold_start_plan(toy, 10);
  REQUIRE(plan.prompts.size() == 1);
  CHECK(plan.prompts[0].words == std::vector<std::string>{"aba", "ac"});

  plan = cold_start_plan(toy, 1);
  REQUIRE(plan.prompts.size() == 1);
  CHECK(plan.prompts[0].words == std::vector<std::string>{"aba"});

  Rng rng = make_rng(4, 0x90);
  const auto big = oracle::random_lexicon(rng, 3000, 30, 6);
  plan = cold_start_plan(big, 50);
  CHECK(plan.word_count() <= 50);
  const auto cover = greedy_biphone_cover(big, 50, 1.0);
  std::vector<std::string> flat;
  for (const auto& p : plan.prompts) {
    CHECK(p.words.size() <= kMaxPromptWords);
    flat.insert(flat.end(), p.words.begin(), p.words.end());
  }
  CHECK(flat == cover.chosen);
}

TEST_CASE("score_words") {
  const auto lex = lexicon_from("bab\tb a b\naca\ta c a\nccc\tc c c\n", PhonemeInventory({"a", "b", "c"}));
  PhonemeDifficulty d;
  d.rows = {{"a", 0, 0, 0.2}, {"b", 0, 0, 0.4}, {"c", 0, 0, 0.0}};
  const auto r = score_words(lex, d);
  CHECK(r[0] == WordScore{"bab", (0.4 + 0.2 + 0.4) / 3.0});
  CHECK(r[0].score == doctest::Approx(1.0 / 3.0));
  CHECK(r[1].word == "aca");
  CHECK(r[2].word == "ccc");

  d.rows = {{"a", 0, 0, 0.1}, {"b", 0, 0, 0.1}, {"c", 0, 0, 0.1}};
  const auto flat = score_words(lex, d);
  CHECK(flat[0].word == "aca");
  CHECK(flat[1].word == "bab");
  CHECK(flat[2].word == "ccc");
  CHECK(flat[0].score == flat[2].score);
}

TEST_CASE("rechain_sentences examples") {
  const auto lex = lexicon_from(kNouns);
  const auto templates = templates_from("the <noun> sees the <noun>\n");
  const std::vector<WordScore> two{{"pelican", 1.0}, {"boat", 0.5}};
  auto plan = rechain_sentences(two, lex, templates, 1);
  REQUIRE(plan.prompts.size() == 1);
  CHECK(plan.prompts[0].words == std::vector<std::string>{"the", "pelican", "sees", "the", "boat"});

  const std::vector<WordScore> six{{"bab", 6}, {"bob", 5}, {"cat", 4}, {"dog", 3}, {"tip", 2}, {"boat", 1}};
  plan = rechain_sentences(six, lex, templates, 3);
  REQUIRE(plan.prompts.size() == 3);
  std::set<std::vector<std::string>> distinct;
  for (const auto& p : plan.prompts) {
    distinct.insert(p.words);
    CHECK(p.words[1] != p.words[4]);
  }
  CHECK(distinct.size() == 3);
  CHECK(plan.prompts[0].words[1] == "bab");
  CHECK(plan.prompts[0].words[4] == "bob");
  CHECK(plan.prompts[1].words[1] == "cat");

  CHECK(rechain_sentences(six, lex, templates, 0).prompts.empty());

  const auto verbs = templates_from("the <verb> sees the <verb>\n");
  CHECK(error_of([&] { rechain_sentences(six, lex, verbs, 1); }) == ErrorCode::kNoFillableTemplate);
  const std::vector<WordScore> lone{{"pelican", 1.0}};
  CHECK(error_of([&] { rechain_sentences(lone, lex, templates, 1); }) == ErrorCode::kNoFillableTemplate);
}

TEST_CASE("rechain validates generated sentences") {
  const auto lex = lexicon_from(kNouns);
  const auto templates = templates_from("the <noun> sees the <noun>\n");
  const std::vector<WordScore> ranked{{"pelican", 1.0}, {"boat", 0.5}};

  FixedGenerator rogue({"the pelican sees the zeppelin"});
  RechainOptions options;
  options.generator = &rogue;
  options.target_phonemes = {lex.inventory().at("k")};
  auto plan = rechain_sentences(ranked, lex, templates, 1, options);
  CHECK(plan.prompts[0].words == std::vector<std::string>{"the", "pelican", "sees", "the", "boat"});
  CHECK(rogue.last.n == 1);
  CHECK(rogue.last.seed_words == std::vector<std::string>{"pelican", "boat"});
  CHECK(rogue.last.target_phonemes == std::vector<std::string>{"k"});

  FixedGenerator unseeded({"the cat sees the dog"});
  options.generator = &unseeded;
  plan = rechain_sentences(ranked, lex, templates, 1, options);
  CHECK(plan.prompts[0].words[1] == "pelican");

  FixedGenerator good({"The boat sees the pelican."});
  options.generator = &good;
  plan = rechain_sentences(ranked, lex, templates, 1, options);
  CHECK(plan.prompts[0].words == std::vector<std::string>{"the", "boat", "sees", "the", "pelican"});
  CHECK(plan.prompts[0].target_phonemes == std::vector<std::string>{"k"});
}

TEST_CASE("HttpTextGenerator speaks the JSON protocol") {
  nlohmann::json seen;
  LocalServer server([&](httplib::Server& s) {
    s.Post("/gen", [&](const httplib::Request& req, httplib::Response& res) {
      seen = nlohmann::json::parse(req.body);
      res.set_content(R"({"sentences": ["the boat sees the pelican"]})", "application/json");
    });
    s.Post("/junk", [](const httplib::Request&, httplib::Response& res) {
      res.set_content(R"({"text": 1})", "application/json");
    });
  });
  HttpTextGenerator gen(server.url("/gen"));
  const auto out = gen.generate({{"boat"}, {"k"}, 2});
  CHECK(out == std::vector<std::string>{"the boat sees the pelican"});
  CHECK(seen == nlohmann::json{{"seed_words", {"boat"}}, {"target_phonemes", {"k"}}, {"n", 2}});

  HttpTextGenerator junk(server.url("/junk"));
  CHECK(error_of([&] { junk.generate({{"boat"}, {}, 1}); }) == ErrorCode::kProtocolViolation);

  const auto lex = lexicon_from(kNouns);
  const auto templates = templates_from("the <noun> sees the <noun>\n");
  HttpTextGenerator missing(server.url("/missing"));
  RechainOptions options;
  options.generator = &missing;
  const std::vector<WordScore> ranked{{"pelican", 1.0}, {"boat", 0.5}};
  CHECK(rechain_sentences(ranked, lex, templates, 1, options).prompts.size() == 1);
}

TEST_CASE("select_next_prompts contract") {
  const auto lex = lexicon_from(kNouns);
  const auto templates = templates_from("the <noun> sees the <noun>\n");
  const auto model = model_hard_on(lex, "b");
  CurriculumContext ctx{&lex, &model, templates, true, 0, nullptr, kDefaultDifficultyLambda};

  CHECK(select_next_prompts(ctx, 0, Strategy::kUncertainty, 1).prompts.empty());
  CHECK(select_next_prompts(ctx, 0, Strategy::kRandom, 1).prompts.empty());

  const auto plan = select_next_prompts(ctx, 6, Strategy::kUncertainty, 1);
  REQUIRE(plan.prompts.size() == 6);
  for (const auto& p : plan.prompts) {
    CHECK(phoneme_count({0, {p}}, lex, lex.inventory().at("b")) >= 1);
    CHECK(p.target_phonemes.front() == "b");
  }

  for (auto s : {Strategy::kUncertainty, Strategy::kRandom, Strategy::kCoverageOnly}) {
    CHECK(select_next_prompts(ctx, 4, s, 77) == select_next_prompts(ctx, 4, s, 77));
    CHECK(plan_to_json(select_next_prompts(ctx, 4, s, 77)).dump() ==
          plan_to_json(select_next_prompts(ctx, 4, s, 77)).dump());
    CHECK(strategy_from_name(strategy_name(s)) == s);
  }
  CHECK_FALSE(select_next_prompts(ctx, 4, Strategy::kRandom, 77) == select_next_prompts(ctx, 4, Strategy::kRandom, 78));

  auto cold = ctx;
  cold.cold_start_complete = false;
  CHECK(error_of([&] { select_next_prompts(cold, 3, Strategy::kUncertainty, 1); }) ==
        ErrorCode::kColdStartIncomplete);
  CHECK(select_next_prompts(cold, 3, Strategy::kRandom, 1).prompts.size() == 3);
  CHECK(error_of([] { strategy_from_name("greedy"); }) == ErrorCode::kBadConfig);
}

TEST_CASE("random prompts fall back to word lists without templates") {
  const auto lex = lexicon_from(kNouns);
  const AdaptiveModel model(lex.inventory());
  CurriculumContext ctx{&lex, &model, {}, true, 0, nullptr, kDefaultDifficultyLambda};
  const auto plan = select_next_prompts(ctx, 20, Strategy::kRandom, 3);
  REQUIRE(plan.prompts.size() == 20);
  for (const auto& p : plan.prompts) {
    CHECK(p.words.size() >= kMinSentenceWords);
    CHECK(p.words.size() <= kMaxSentenceWords);
    CHECK(std::set<std::string>(p.words.begin(), p.words.end()).size() == p.words.size());
  }
}

TEST_CASE("coverage strategy continues from the cursor") {
  const auto lex = lexicon_from(kNouns);
  const AdaptiveModel model(lex.inventory());
  CurriculumContext ctx{&lex, &model, {}, false, 0, nullptr, kDefaultDifficultyLambda};
  const auto order = greedy_coverage_order(lex);
  const auto first = select_next_prompts(ctx, 1, Strategy::kCoverageOnly, 0);
  REQUIRE(first.prompts.size() == 1);
  CHECK(first.prompts[0].words == std::vector<std::string>(order.begin(), order.begin() + 8));
  ctx.coverage_cursor = 8;
  const auto next = select_next_prompts(ctx, 1, Strategy::kCoverageOnly, 0);
  CHECK(next.prompts[0].words[0] == order[8]);
  CHECK(next.prompts[0].words[1] == order[0]);
}

TEST_CASE("uncertainty prompts target the hardest phoneme at least as often as random ones") {
  const auto lex = Lexicon::load(source_dir() / "fixtures/standard/lexicon.tsv",
                                 source_dir() / "fixtures/standard/inventory.txt");
  const auto templates = load_templates(source_dir() / "fixtures/standard/templates.txt");
  const auto& inv = lex.inventory();
  for (const auto& hard : {std::string("k"), std::string("b"), inv.symbols().back()}) {
    CAPTURE(hard);
    AdaptiveModel model(inv);
    for (std::size_t p = 0; p < inv.size(); ++p) {
      if (inv.symbols()[p] != hard) {
        model.add_count(Phoneme{static_cast<std::uint16_t>(p)}, Phoneme{static_cast<std::uint16_t>(p)}, 200.0);
      }
    }
    const CurriculumContext ctx{&lex, &model, templates, true, 0, nullptr, kDefaultDifficultyLambda};
    const auto target = inv.at(hard);
    for (std::uint64_t nonce = 1; nonce <= 20; ++nonce) {
      const auto u = select_next_prompts(ctx, 10, Strategy::kUncertainty, nonce);
      const auto r = select_next_prompts(ctx, 10, Strategy::kRandom, nonce);
      const double fu = static_cast<double>(phoneme_count(u, lex, target)) / static_cast<double>(u.word_count());
      const double fr = static_cast<double>(phoneme_count(r, lex, target)) / static_cast<double>(r.word_count());
      CAPTURE(nonce);
      CHECK(fu >= fr);
    }
  }
}

TEST_CASE("every emitted word resolves in the lexicon") {
  const auto lex = Lexicon::load(source_dir() / "fixtures/standard/lexicon.tsv",
                                 source_dir() / "fixtures/standard/inventory.txt");
  const auto templates = load_templates(source_dir() / "fixtures/standard/templates.txt");
  const AdaptiveModel model(lex.inventory());
  for (const auto& tmpl : {std::span<const SentenceTemplate>(templates), std::span<const SentenceTemplate>()}) {
    const CurriculumContext ctx{&lex, &model, tmpl, true, 5, nullptr, kDefaultDifficultyLambda};
    for (auto s : {Strategy::kUncertainty, Strategy::kRandom, Strategy::kCoverageOnly}) {
      if (tmpl.empty() && s == Strategy::kUncertainty) continue;
      for (std::uint64_t nonce = 0; nonce < 5; ++nonce) {
        const auto plan = select_next_prompts(ctx, 10, s, nonce);
        CHECK(plan.prompts.size() == 10);
        for (const auto& p : plan.prompts) {
          CHECK_FALSE(p.words.empty());
          for (const auto& w : p.words) CHECK(lex.contains(w));
        }
      }
    }
  }
}

TEST_CASE("prompt plan JSON round trip") {
  PromptPlan plan;
  plan.round = 3;
  plan.prompts = {{{"the", "boat"}, {"b"}}, {{"cat"}, {}}};
  CHECK(plan_from_json(plan_to_json(plan)) == plan);
  CHECK(plan.word_count() == 3);
  CHECK(error_of([] { plan_from_json(nlohmann::json::object()); }) == ErrorCode::kParseError);
}
