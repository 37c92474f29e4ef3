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

#include <set>

#include "doctest.h"
#include "qeforge/errors.hpp"
#include "qeforge/evaluation.hpp"
#include "qeforge/fixture.hpp"
#include "qeforge/morph.hpp"
#include "qeforge/text.hpp"
#include "unit/helpers.hpp"

using namespace qeforge;
using namespace qeforge::fixture;

namespace {

FixtureConfig small() {
  FixtureConfig c;
  c.sentences = 120;
  c.professional = 60;
  c.usage_examples = 10;
  return c;
}

}  // namespace

TEST_CASE("fixture is seed-determined") {
  auto a = make_fixture(small());
  auto b = make_fixture(small());
  CHECK(a.sentences == b.sentences);
  CHECK(a.engine_base == b.engine_base);
  CHECK(a.gold == b.gold);
  CHECK(a.lexicon_tsv == b.lexicon_tsv);
  auto c_cfg = small();
  c_cfg.seed = 43;
  CHECK(make_fixture(c_cfg).sentences != a.sentences);
}

TEST_CASE("fixture shape") {
  auto f = make_fixture(small());
  CHECK(f.sentences.size() == 120);
  CHECK(f.engine_base.size() == 120);
  CHECK(f.gold.size() == 120);
  CHECK(f.professional.size() == 60);
  CHECK(f.usage_examples.size() == 10);
  CHECK(f.engines.size() >= 2);
  std::set<int> priorities;
  for (const auto& e : f.engines) CHECK(priorities.insert(e.id.priority).second);
  std::set<std::string> unique(f.sentences.begin(), f.sentences.end());
  CHECK(unique.size() == f.sentences.size());

  auto lex = morph::MorphLexicon::parse(f.lexicon_tsv, "fixture");
  CHECK(lex.size() > 100);
  auto glossary = eval::Glossary::parse(f.glossary_tsv, "fixture");
  CHECK(glossary.size() > 50);
  // Every gold target offers at least one agreement site.
  for (const auto& [src, tgt] : f.gold)
    CHECK(!morph::find_injection_sites(morph::word_tokens(tgt), lex).empty());
}

TEST_CASE("fixture files round-trip") {
  testutil::TempDir dir;
  auto f = make_fixture(small());
  write_fixture(f, dir.path().string());
  auto g = read_fixture(dir.path().string());
  CHECK(g.sentences == f.sentences);
  CHECK(g.engine_base == f.engine_base);
  CHECK(g.gold == f.gold);
  CHECK(g.professional == f.professional);
  CHECK(g.usage_examples.size() == f.usage_examples.size());
  CHECK(g.lexicon_tsv == f.lexicon_tsv);
  CHECK(g.glossary_tsv == f.glossary_tsv);
  CHECK(engines_to_text(g.engines) == engines_to_text(f.engines));
}

TEST_CASE("engine list parsing") {
  auto engines = parse_engines("# name priority rate drop\nalpha\t0\t0.02\t0\nbeta\t1\t0.1\t7\n");
  REQUIRE(engines.size() == 2);
  CHECK(engines[1].id.name == "beta");
  CHECK(engines[1].behavior.drop_every == 7);
  CHECK(engines[1].behavior.substitution_rate == doctest::Approx(0.1));
  CHECK(parse_engines(engines_to_text(engines)).size() == 2);
  CHECK_THROWS_AS(parse_engines("alpha\tzero\t0.1\t0\n"), ParseError);
}

TEST_CASE("mock engines mostly agree on fixture sentences") {
  auto f = make_fixture(small());
  auto mt = make_translator(f, 7);
  std::size_t same = 0;
  for (const auto& [src, base] : f.engine_base) {
    auto a = mt.translate(f.engines[0].id.name, src);
    CHECK(a == mt.translate(f.engines[0].id.name, src));
    if (a == base) ++same;
  }
  CHECK(same > f.engine_base.size() / 3);
}

TEST_CASE("token edit distance") {
  auto t = [](const char* s) { return text::split_whitespace(s); };
  CHECK(token_edit_distance(t("a b c"), t("a b c")) == 0);
  CHECK(token_edit_distance(t("a b c"), t("a x c")) == 1);
  CHECK(token_edit_distance(t("a b c"), t("a c")) == 1);
  CHECK(token_edit_distance(t(""), t("a b")) == 2);
  CHECK(token_edit_distance(t("a b c d"), t("d c b a")) == 4);
}

TEST_CASE("simulated annotator") {
  std::vector<std::pair<std::string, std::string>> gold{
      {"The dog runs.", "הכלב רץ מהר ."}};
  SimulatedAnnotator exact(gold, 1, 0.0);
  CHECK(exact.judge(testutil::scored("a", "The dog runs.", "הכלב רץ מהר .", 0)) == 5);
  CHECK(exact.judge(testutil::scored("a", "The dog runs.", "הכלב רצה מהר .", 0)) == 4);
  CHECK(exact.judge(testutil::scored("a", "The dog runs.", "x y z w v u", 0)) == 1);
  CHECK_THROWS_AS(exact.judge(testutil::scored("a", "unknown", "t", 0)), InvalidArgument);

  SimulatedAnnotator noisy(gold, 1, 1.0);
  int off = 0;
  for (int i = 0; i < 50; ++i) {
    auto seg = testutil::scored("id" + std::to_string(i), "The dog runs.", "הכלב רצה מהר .", 0);
    int s = noisy.judge(seg);
    CHECK(s >= 1);
    CHECK(s <= 5);
    CHECK(s == noisy.judge(seg));
    off += s != 4;
  }
  CHECK(off > 0);
}

TEST_CASE("shipped fixture matches the generator") {
  auto shipped = read_fixture(std::string(QEFORGE_DATA_DIR) + "/fixture");
  auto fresh = make_fixture({});
  CHECK(shipped.sentences == fresh.sentences);
  CHECK(shipped.engine_base == fresh.engine_base);
  CHECK(shipped.gold == fresh.gold);
  CHECK(shipped.professional == fresh.professional);
  CHECK(shipped.lexicon_tsv == fresh.lexicon_tsv);
  CHECK(shipped.glossary_tsv == fresh.glossary_tsv);
}
