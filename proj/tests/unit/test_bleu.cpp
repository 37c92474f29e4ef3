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
#include <sstream>

#include "doctest.h"
#include "oracles/oracles.hpp"
#include "qeforge/bleu.hpp"
#include "qeforge/errors.hpp"
#include "qeforge/random.hpp"

using namespace qeforge;

namespace {

std::vector<std::string> words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

struct Pinned {
  const char* hyp;
  const char* ref;
  double value;
};

// Values from the brute-force oracle, checked by hand for the first two.
constexpr Pinned kPinned[] = {
    {"a b c e", "a b c d", 0.39763536438352533},
    {"x y", "a b c d", 0.026013004751144445},
    {"the cat sat on the mat", "the cat sat on the mat", 1.0},
    {"the the the the", "the cat sat on the mat", 0.057950534707339513},
    {"the cat", "the cat sat on the mat", 0.13533528323661269},
    {"a b a b a b", "a b a b", 0.50813274815461474},
    {"a b c d e f", "f e d c b a", 0.063894310424627248},
    {"one two three four five", "one two three five four", 0.30213753973567681},
    {"a", "a", 1.0},
    {"a", "b", 0.1},
    {"a b c d e f g h", "a b c d x f g h", 0.5},
    {"the big dog runs", "the dog runs big", 0.20205155046766234},
};

}  // namespace

TEST_CASE("hand value for the one-word-off case") {
  // p1 = 3/4, p2 = 2/3, p3 = 1/2, p4 = 0.1/1, no brevity penalty.
  const double expect = std::pow(0.75 * (2.0 / 3.0) * 0.5 * 0.1, 0.25);
  CHECK(bleu::sentence_bleu("a b c e", "a b c d") == doctest::Approx(expect).epsilon(1e-15));
}

TEST_CASE("pinned cases match the oracle and the library") {
  bleu::BleuConfig ws;
  ws.tokenizer = bleu::Tokenizer::kWhitespace;
  for (const auto& p : kPinned) {
    CAPTURE(p.hyp);
    CAPTURE(p.ref);
    const double lib = bleu::sentence_bleu(p.hyp, p.ref, ws);
    const double orc = static_cast<double>(oracle::bleu(words(p.hyp), words(p.ref)));
    CHECK(std::abs(lib - p.value) <= 1e-9);
    CHECK(std::abs(orc - p.value) <= 1e-9);
  }
}

TEST_CASE("identity gives exactly 1") {
  Rng rng(1);
  for (int i = 0; i < 200; ++i) {
    std::string s;
    for (std::size_t k = 1 + rng.index(15); k > 0; --k)
      s += "w" + std::to_string(rng.index(8)) + (rng.bernoulli(0.2) ? ", " : " ");
    CHECK(bleu::sentence_bleu(s, s) == 1.0);
  }
}

TEST_CASE("zero overlap is heavily smoothed") {
  const double v = bleu::sentence_bleu("x y", "a b c d");
  CHECK(v < 0.03);
  CHECK(v > 0.0);
}

TEST_CASE("tokenizer") {
  bleu::BleuConfig cfg;
  CHECK(bleu::tokenize("a b c", cfg) == std::vector<std::string>{"a", "b", "c"});
  CHECK(bleu::tokenize("hello, world.", cfg) ==
        std::vector<std::string>{"hello", ",", "world", "."});
  CHECK(bleu::tokenize("\"quoted!\"", cfg) ==
        std::vector<std::string>{"\"", "quoted", "!", "\""});
  CHECK(bleu::tokenize("בית־ספר גדול", cfg) ==
        std::vector<std::string>{"בית־ספר", "גדול"});
  CHECK(bleu::tokenize("   ", cfg).empty());
  cfg.tokenizer = bleu::Tokenizer::kWhitespace;
  CHECK(bleu::tokenize("hello, world.", cfg) ==
        std::vector<std::string>{"hello,", "world."});
}

TEST_CASE("errors and config") {
  CHECK_THROWS_AS(bleu::sentence_bleu("", "a"), EmptyText);
  CHECK_THROWS_AS(bleu::sentence_bleu("a", "  "), EmptyText);
  bleu::BleuConfig bad;
  bad.max_order = 0;
  CHECK_THROWS_AS(bleu::sentence_bleu("a", "a", bad), InvalidArgument);
  bad.max_order = 4;
  bad.smoothing_epsilon = 0.0;
  CHECK_THROWS_AS(bleu::sentence_bleu("a", "a", bad), InvalidArgument);
}

TEST_CASE("symmetric agreement") {
  const std::string a = "the dog runs fast", b = "the dog runs";
  CHECK(bleu::symmetric_agreement(a, b) == bleu::symmetric_agreement(b, a));
  CHECK(bleu::symmetric_agreement(a, b) ==
        doctest::Approx(0.5 * (bleu::sentence_bleu(a, b) + bleu::sentence_bleu(b, a))));
  CHECK(bleu::symmetric_agreement(a, a) == 1.0);
}

TEST_CASE("random sentences agree with the oracle") {
  Rng rng(77);
  bleu::BleuConfig ws;
  ws.tokenizer = bleu::Tokenizer::kWhitespace;
  for (int i = 0; i < 300; ++i) {
    std::vector<std::string> h, r;
    for (std::size_t k = 1 + rng.index(10); k > 0; --k) h.push_back(std::to_string(rng.index(5)));
    for (std::size_t k = 1 + rng.index(10); k > 0; --k) r.push_back(std::to_string(rng.index(5)));
    const double lib = bleu::sentence_bleu(h, r, ws);
    CHECK(std::abs(lib - static_cast<double>(oracle::bleu(h, r))) <= 1e-12);
    CHECK(lib >= 0.0);
    CHECK(lib <= 1.0);
  }
}
