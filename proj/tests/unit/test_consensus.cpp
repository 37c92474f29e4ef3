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

#include "doctest.h"
#include "oracles/oracles.hpp"
#include "qeforge/consensus.hpp"
#include "qeforge/errors.hpp"
#include "qeforge/random.hpp"

using namespace qeforge;
using ingest::CandidateSet;

namespace {

CandidateSet make_set(const std::string& id, std::vector<std::pair<std::string, int>> engines,
                      std::vector<std::string> texts) {
  CandidateSet s;
  s.id = SegmentId(id);
  s.source = "source " + id;
  for (std::size_t i = 0; i < engines.size(); ++i)
    s.translations.push_back({{engines[i].first, engines[i].second}, texts[i]});
  return s;
}

consensus::PairwiseAgreements keyed(const CandidateSet& s,
                                    const std::vector<std::vector<double>>& m) {
  consensus::PairwiseAgreements out;
  const auto& t = s.translations;
  for (std::size_t i = 0; i < t.size(); ++i)
    for (std::size_t j = 0; j < t.size(); ++j)
      if (t[i].engine.priority < t[j].engine.priority)
        out[{t[i].engine.name, t[j].engine.name}] = m[i][j];
  return out;
}

}  // namespace

TEST_CASE("pair count and identical translations") {
  auto s = make_set("1", {{"a", 0}, {"b", 1}, {"c", 2}}, {"x y z", "x y z", "x y z"});
  auto p = consensus::pairwise_agreements(s);
  CHECK(p.size() == 3);
  for (auto& [k, v] : p) CHECK(v == 1.0);
  auto two = make_set("2", {{"a", 0}, {"b", 1}}, {"x", "y"});
  CHECK(consensus::pairwise_agreements(two).size() == 1);
}

TEST_CASE("A = B, C divergent") {
  auto s = make_set("1", {{"a", 0}, {"b", 1}, {"c", 2}},
                    {"the dog runs fast", "the dog runs fast", "a cat sleeps"});
  auto p = consensus::pairwise_agreements(s);
  CHECK(p.at({"a", "b"}) == 1.0);
  const double ac = static_cast<double>(
      (oracle::bleu({"the", "dog", "runs", "fast"}, {"a", "cat", "sleeps"}) +
       oracle::bleu({"a", "cat", "sleeps"}, {"the", "dog", "runs", "fast"})) / 2);
  CHECK(p.at({"a", "c"}) == doctest::Approx(ac).epsilon(1e-12));
  CHECK(p.at({"b", "c"}) == p.at({"a", "c"}));
  CHECK(p.at({"a", "c"}) < 1.0);
}

TEST_CASE("exclusion below threshold") {
  auto s = make_set("1", {{"a", 0}, {"b", 1}}, {"p", "q"});
  auto r = consensus::decide(s, {{{"a", "b"}, 0.5}}, 0.85);
  CHECK(r.excluded);
  CHECK_FALSE(r.selected.has_value());
  auto keep = consensus::decide(s, {{{"a", "b"}, 0.85}}, 0.85);
  CHECK_FALSE(keep.excluded);
}

TEST_CASE("all ties go to the two highest-priority engines") {
  auto s = make_set("1", {{"c", 2}, {"a", 0}, {"b", 1}}, {"t", "t", "t"});
  auto r = consensus::apply_consensus(s);
  REQUIRE(r.selected.has_value());
  CHECK(r.selected->first.name == "a");
  CHECK(r.selected->second.name == "b");
  CHECK(r.selected->canonical_target == "t");
}

TEST_CASE("best of {0.9, 0.86, 0.3}") {
  auto s = make_set("1", {{"a", 0}, {"b", 1}, {"c", 2}}, {"ta", "tb", "tc"});
  auto r = consensus::decide(s, {{{"a", "b"}, 0.86}, {{"a", "c"}, 0.3}, {{"b", "c"}, 0.9}}, 0.85);
  REQUIRE(r.selected.has_value());
  CHECK(r.selected->first.name == "b");
  CHECK(r.selected->second.name == "c");
  CHECK(r.selected->canonical_target == "tb");
  CHECK(r.selected->agreement == 0.9);
}

TEST_CASE("threshold and input validation") {
  auto s = make_set("1", {{"a", 0}, {"b", 1}}, {"p", "q"});
  CHECK_THROWS_AS(consensus::decide(s, {{{"a", "b"}, 0.9}}, 0.0), InvalidArgument);
  CHECK_THROWS_AS(consensus::decide(s, {{{"a", "b"}, 0.9}}, 1.01), InvalidArgument);
  CHECK_THROWS_AS(consensus::decide(s, {}, 0.85), InvalidArgument);
}

TEST_CASE("decision matches the brute-force oracle and ignores list order") {
  Rng rng(8);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 2 + rng.index(3);
    std::vector<std::pair<std::string, int>> engines;
    std::vector<oracle::Engine> oe;
    std::vector<std::string> texts;
    for (std::size_t i = 0; i < n; ++i) {
      engines.push_back({"e" + std::to_string(i), static_cast<int>(i)});
      oe.push_back({"e" + std::to_string(i), static_cast<int>(i)});
      texts.push_back("text" + std::to_string(i));
    }
    std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        m[i][j] = m[j][i] = rng.bernoulli(0.3) ? 0.9 : std::round(rng.unit() * 20) / 20;
    auto s = make_set("s", engines, texts);
    auto agree = keyed(s, m);
    auto lib = consensus::decide(s, agree, 0.85);
    auto orc = oracle::best_pair(oe, m, 0.85);
    REQUIRE(lib.excluded == !orc.has_value());
    if (orc) {
      CHECK(lib.selected->first.name == oe[orc->a].name);
      CHECK(lib.selected->second.name == oe[orc->b].name);
      CHECK(lib.selected->canonical_target == texts[orc->a]);
    }
    auto reversed = s;
    std::reverse(reversed.translations.begin(), reversed.translations.end());
    auto again = consensus::decide(reversed, agree, 0.85);
    CHECK(again.excluded == lib.excluded);
    if (lib.selected) CHECK(again.selected->first.name == lib.selected->first.name);
  }
}

TEST_CASE("lowering the threshold never drops a selection") {
  auto s = make_set("1", {{"a", 0}, {"b", 1}, {"c", 2}},
                    {"the dog runs fast today", "the dog runs fast now", "a cat"});
  bool was_selected = false;
  for (double th = 1.0; th > 0.05; th -= 0.05) {
    auto r = consensus::apply_consensus(s, th);
    if (was_selected) CHECK_FALSE(r.excluded);
    was_selected = was_selected || !r.excluded;
  }
  CHECK(was_selected);
}

TEST_CASE("filter keeps unscored consensus records sorted by id") {
  std::vector<CandidateSet> sets = {
      make_set("b", {{"x", 0}, {"y", 1}}, {"same text here", "same text here"}),
      make_set("a", {{"x", 0}, {"y", 1}}, {"one two three", "four five six"}),
      make_set("c", {{"x", 0}, {"y", 1}}, {"keep me please", "keep me please"})};
  auto out = consensus::filter_candidates(sets);
  REQUIRE(out.kept.size() == 2);
  CHECK(out.kept[0].id.str() == "b");
  CHECK(out.kept[1].id.str() == "c");
  CHECK(out.kept[0].origin == Origin::kConsensusFiltered);
  CHECK_FALSE(out.kept[0].score.has_value());
  CHECK(out.kept[0].engine == "x");
  CHECK(out.kept[0].agreement == 1.0);
  REQUIRE(out.rejected.size() == 1);
  CHECK(out.rejected[0].id.str() == "a");
  CHECK(out.rejected[0].best_agreement < 0.85);
  CHECK(consensus::encode_rejections(out.rejected).find("a\t") == 0);
}
