// Copyright 2026 The qeforge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <map>
#include <set>

#include "doctest.h"
#include "qeforge/errors.hpp"
#include "qeforge/morph.hpp"
#include "qeforge/random.hpp"
#include "qeforge/text.hpp"
#include "unit/helpers.hpp"

using namespace qeforge;
using namespace qeforge::morph;

namespace {

const char* kLexicon =
    "# toy agreement lexicon\n"
    "actor\tm\tsg\tf.sg=actress\tm.pl=actors\n"
    "actress\tf\tsg\tm.sg=actor\tf.pl=actresses\n"
    "is\tnone\tsg\tnone.pl=are\n"
    "are\tnone\tpl\tnone.sg=is\n"
    "tall\tm\tsg\tf.sg=tall,m.pl=talls\n"
    "same\tm\tsg\tf.sg=same\n";

MorphLexicon lexicon() { return MorphLexicon::parse(kLexicon, "toy"); }

}  // namespace

TEST_CASE("features round-trip through text") {
  for (auto g : {Gender::kMasculine, Gender::kFeminine, Gender::kNone})
    for (auto n : {Number::kSingular, Number::kPlural, Number::kNone}) {
      Features f{g, n};
      auto back = parse_features(to_string(f));
      REQUIRE(back);
      CHECK(*back == f);
    }
  CHECK_FALSE(parse_features("x.sg"));
  CHECK_FALSE(parse_features("msg"));
}

TEST_CASE("lexicon parsing") {
  auto lex = lexicon();
  CHECK(lex.size() == 6);
  const auto* actor = lex.find("actor");
  REQUIRE(actor);
  CHECK(actor->variants.size() == 3);
  CHECK(actor->variants.at({Gender::kMasculine, Number::kSingular}) == "actor");
  CHECK(lex.find("nobody") == nullptr);

  CHECK_THROWS_AS(MorphLexicon::parse("a\tm\tsg\n"), ParseError);
  CHECK_THROWS_AS(MorphLexicon::parse("a\tq\tsg\tf.sg=b\n"), ParseError);
  CHECK_THROWS_AS(MorphLexicon::parse("a\tm\tsg\tf.sg\n"), ParseError);
  // Own slot listed with a different form.
  CHECK_THROWS_AS(MorphLexicon::parse("a\tm\tsg\tm.sg=b,f.sg=c\n"), ParseError);
  // Only its own slot.
  CHECK_THROWS_AS(MorphLexicon::parse("a\tm\tsg\tm.sg=a\n"), ParseError);
}

TEST_CASE("first entry for a surface wins") {
  auto lex = MorphLexicon::parse("a\tm\tsg\tf.sg=b\na\tf\tsg\tm.sg=c\n");
  CHECK(lex.size() == 1);
  CHECK(lex.find("a")->features.gender == Gender::kMasculine);
}

TEST_CASE("alternatives are single-feature flips with different text") {
  auto lex = lexicon();
  auto alts = alternatives(*lex.find("actor"));
  std::set<std::string> forms;
  for (const auto& a : alts) forms.insert(a.form);
  CHECK(forms == std::set<std::string>{"actress", "actors"});

  // Gender flip spelled identically is not an error.
  auto tall = alternatives(*lex.find("tall"));
  REQUIRE(tall.size() == 1);
  CHECK(tall[0].form == "talls");
  CHECK(alternatives(*lex.find("same")).empty());
}

TEST_CASE("injection sites skip entries without a real alternative") {
  auto lex = lexicon();
  auto tokens = word_tokens("the same actor is (tall).");
  auto sites = find_injection_sites(tokens, lex);
  REQUIRE(sites.size() == 3);
  CHECK(sites[0].position == 2);
  CHECK(sites[1].position == 3);
  CHECK(sites[2].position == 4);
}

TEST_CASE("variant capacity") {
  auto lex = lexicon();
  auto tokens = word_tokens("the actor is tall");
  CHECK(variant_capacity(tokens, lex, 1) == 4);      // 2 + 1 + 1
  CHECK(variant_capacity(tokens, lex, 2) == 2 + 2 + 1);
  CHECK(variant_capacity(word_tokens("nothing here"), lex, 1) == 0);
}

TEST_CASE("inject_errors applies the score law") {
  auto lex = lexicon();
  Rng rng(7);
  for (int score = 2; score <= 5; ++score) {
    auto seg = testutil::scored("s", "src", "the actor is tall.", score);
    auto one = inject_errors(seg, 1, lex, rng);
    CHECK(one.score_value() == std::max(score - 1, 1));
    CHECK(one.origin == Origin::kMorphError);
    CHECK(one.error_count == 1);
    REQUIRE(one.parent);
    CHECK(*one.parent == seg.id);
    auto two = inject_errors(seg, 2, lex, rng);
    CHECK(two.score_value() == std::max(score - 2, 1));
    CHECK(two.error_count == 2);

    auto a = word_tokens(seg.target);
    auto b = word_tokens(two.target);
    REQUIRE(a.size() == b.size());
    int changed = 0;
    for (std::size_t i = 0; i < a.size(); ++i) changed += a[i] != b[i];
    CHECK(changed == 2);
  }
}

TEST_CASE("inject_errors keeps attached punctuation") {
  auto lex = lexicon();
  Rng rng(1);
  auto seg = testutil::scored("s", "src", "(actor).", 5);
  auto out = inject_errors(seg, 1, lex, rng);
  CHECK((out.target == "(actress)." || out.target == "(actors)."));
}

TEST_CASE("inject_errors rejects bad input") {
  auto lex = lexicon();
  Rng rng(3);
  auto none = testutil::scored("s", "src", "no sites at all", 5);
  CHECK_THROWS_AS(inject_errors(none, 1, lex, rng), InsufficientSites);
  auto single = testutil::scored("s", "src", "one actor only", 5);
  try {
    inject_errors(single, 2, lex, rng);
    FAIL("expected InsufficientSites");
  } catch (const InsufficientSites& e) {
    CHECK(e.requested() == 2);
    CHECK(e.available() == 1);
  }
  auto low = testutil::scored("s", "src", "the actor is tall", 1);
  CHECK_THROWS_AS(inject_errors(low, 1, lex, rng), ScoreTooLow);
  auto ok = testutil::scored("s", "src", "the actor is tall", 4);
  CHECK_THROWS_AS(inject_errors(ok, 3, lex, rng), InvalidArgument);
}

TEST_CASE("plan parsing") {
  auto plan = parse_plan("1:100, 2:*");
  CHECK(plan.counts.at(1) == std::optional<std::size_t>(100));
  CHECK_FALSE(plan.counts.at(2).has_value());
  CHECK(to_string(plan) == "1:100,2:*");
  CHECK(parse_plan("").counts.empty());
  CHECK_THROWS_AS(parse_plan("3:4"), InvalidArgument);
  CHECK_THROWS_AS(parse_plan("1"), InvalidArgument);
  CHECK_THROWS_AS(parse_plan("1:-2"), InvalidArgument);
}

TEST_CASE("100 score-5 segments with one variant per level") {
  auto lex = lexicon();
  Dataset in;
  for (int i = 0; i < 100; ++i)
    in.push_back(testutil::scored("seg-" + std::to_string(i), "src",
                                  "the actor is tall", 5));
  auto out = augment_corpus(in, lex, parse_plan("1:100,2:100"), 11);
  CHECK(out.size() == 300);
  std::map<int, int> by_score;
  for (const auto& r : out) ++by_score[r.score_value()];
  CHECK(by_score == std::map<int, int>{{3, 100}, {4, 100}, {5, 100}});
  // Inputs come first, each followed by its own variants.
  CHECK(out[0].id == in[0].id);
  CHECK(*out[1].parent == in[0].id);
}

TEST_CASE("augment_corpus is deterministic and emits distinct variants") {
  auto lex = lexicon();
  Dataset in;
  for (int i = 0; i < 20; ++i)
    in.push_back(testutil::scored("seg-" + std::to_string(i), "src",
                                  "the actor is tall and the actress is tall", 4));
  auto plan = parse_plan("1:60,2:40");
  auto a = augment_corpus(in, lex, plan, 5);
  auto b = augment_corpus(in, lex, plan, 5);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].target == b[i].target);
  std::map<std::string, std::set<std::string>> per_parent;
  std::size_t variants = 0;
  for (const auto& r : a)
    if (r.parent) {
      ++variants;
      CHECK(per_parent[r.parent->str()].insert(r.target).second);
    }
  CHECK(variants == 100);
}

TEST_CASE("infeasible plans are reported with the shortfall") {
  auto lex = lexicon();
  Dataset in{testutil::scored("a", "src", "one actor", 5),
             testutil::scored("b", "src", "nothing", 5),
             testutil::scored("c", "src", "the actor is tall", 1)};
  try {
    augment_corpus(in, lex, parse_plan("1:5"), 1);
    FAIL("expected PlanInfeasible");
  } catch (const PlanInfeasible& e) {
    CHECK(e.errors() == 1);
    CHECK(e.achievable() == 2);
    CHECK(e.shortfall() == 3);
  }
  // "*" means one variant per eligible segment.
  auto out = augment_corpus(in, lex, parse_plan("1:*"), 1);
  CHECK(out.size() == 4);
}

TEST_CASE("agreement conflicts count mixed features") {
  auto lex = lexicon();
  CHECK(agreement_conflicts(word_tokens("the actor is tall"), lex) == 0);
  CHECK(agreement_conflicts(word_tokens("the actress is tall"), lex) == 1);
  CHECK(agreement_conflicts(word_tokens("the actor are tall"), lex) == 1);
}

TEST_CASE("bundled lexicons load") {
  for (const char* name : {"lexicon_en_toy.tsv", "lexicon_he_toy.tsv"}) {
    auto lex = MorphLexicon::load(std::string(QEFORGE_DATA_DIR) + "/" + name);
    CHECK(lex.size() > 10);
  }
}
