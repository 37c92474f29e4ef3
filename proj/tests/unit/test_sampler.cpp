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
#include "qeforge/sampler.hpp"
#include "unit/helpers.hpp"

using namespace qeforge;
using namespace qeforge::sampling;

namespace {

Dataset pool(std::size_t per_class) {
  Dataset out;
  for (int s = 0; s <= 5; ++s)
    for (std::size_t i = 0; i < per_class; ++i) {
      auto id = "c" + std::to_string(s) + "-" + std::to_string(i);
      out.push_back(testutil::scored(id, "src " + id, "tgt " + id, s));
    }
  return out;
}

std::map<int, std::size_t> histogram(const Dataset& d) {
  std::map<int, std::size_t> h;
  for (const auto& r : d) ++h[r.score_value()];
  return h;
}

}  // namespace

TEST_CASE("spec validation") {
  CHECK_THROWS_AS(DistributionSpec({0.5, 0.5, 0.1, 0, 0, 0}), InvalidArgument);
  CHECK_THROWS_AS(DistributionSpec({-0.1, 0.6, 0.5, 0, 0, 0}), InvalidArgument);
  CHECK_NOTHROW(DistributionSpec({1, 0, 0, 0, 0, 0}));
  auto skew = skewed_spec(3, 0.9);
  CHECK(skew[3] == doctest::Approx(0.9));
  CHECK(skew[0] == doctest::Approx(0.02));
  CHECK(parse_spec("skew3")[3] == doctest::Approx(0.9));
  CHECK(parse_spec("1,1,1,1,1,3")[5] == doctest::Approx(0.375));
  CHECK_THROWS_AS(parse_spec("bogus"), InvalidArgument);
  CHECK_THROWS_AS(parse_spec("1,2,3"), InvalidArgument);
}

TEST_CASE("quotas") {
  using Q = std::array<std::size_t, 6>;
  CHECK(quotas(uniform_spec(), 600) == Q{100, 100, 100, 100, 100, 100});
  CHECK(quotas(normal_spec(), 320) == Q{10, 50, 100, 100, 50, 10});
  // 7 over 6 uniform classes: the tie goes to score 0.
  CHECK(quotas(uniform_spec(), 7) == Q{2, 1, 1, 1, 1, 1});
  auto q = quotas(normal_spec(), 1001);
  std::size_t sum = 0;
  for (auto x : q) sum += x;
  CHECK(sum == 1001);
}

TEST_CASE("uniform sample of 600 has 100 per class") {
  auto p = pool(150);
  auto s = sample_by_spec(p, uniform_spec(), 600, 1);
  CHECK(s.size() == 600);
  for (int c = 0; c <= 5; ++c) CHECK(histogram(s)[c] == 100);
  std::set<std::string> ids;
  for (const auto& r : s) CHECK(ids.insert(r.id.str()).second);
}

TEST_CASE("normal sample of 320") {
  auto s = sample_by_spec(pool(150), normal_spec(), 320, 2);
  CHECK(histogram(s) ==
        std::map<int, std::size_t>{{0, 10}, {1, 50}, {2, 100}, {3, 100}, {4, 50}, {5, 10}});
}

TEST_CASE("sample output is ordered and seed-determined") {
  auto p = pool(150);
  auto a = sample_by_spec(p, uniform_spec(), 300, 9);
  auto b = sample_by_spec(p, uniform_spec(), 300, 9);
  auto c = sample_by_spec(p, uniform_spec(), 300, 10);
  CHECK(a == b);
  CHECK_FALSE(a == c);
  for (std::size_t i = 1; i < a.size(); ++i) {
    auto prev = std::make_pair(a[i - 1].score_value(), a[i - 1].id);
    auto cur = std::make_pair(a[i].score_value(), a[i].id);
    CHECK(prev < cur);
  }
}

TEST_CASE("exhausted classes and bad pools") {
  try {
    sample_by_spec(pool(50), uniform_spec(), 600, 1);
    FAIL("expected ClassExhausted");
  } catch (const ClassExhausted& e) {
    CHECK(std::string(e.what()).find("score class 0") != std::string::npos);
  }
  auto p = pool(10);
  p.push_back(p.front());
  CHECK_THROWS_AS(sample_by_spec(p, uniform_spec(), 6, 1), InvariantViolation);
  Dataset unscored = pool(10);
  unscored[3].score.reset();
  CHECK_THROWS_AS(sample_by_spec(unscored, uniform_spec(), 6, 1), InvariantViolation);
}

TEST_CASE("random sample") {
  auto p = pool(20);
  auto s = random_sample(p, 50, 4);
  CHECK(s.size() == 50);
  std::set<std::string> ids;
  for (const auto& r : s) CHECK(ids.insert(r.id.str()).second);
  CHECK(random_sample(p, 50, 4) == s);
  CHECK_THROWS_AS(random_sample(p, 121, 4), PoolTooSmall);
}

TEST_CASE("max zeros under a cap") {
  CHECK(max_zeros_under_cap(200, 1.0 / 3) == 100);
  CHECK(max_zeros_under_cap(0, 1.0 / 3) == 0);
  CHECK(max_zeros_under_cap(99, 0.5) == 99);
  CHECK(max_zeros_under_cap(3, 0.2) == 0);
}

TEST_CASE("zero cap keeps non-zero records in place") {
  Dataset d;
  for (int i = 0; i < 200; ++i) d.push_back(testutil::scored("z" + std::to_string(i), "s", "t", 0));
  for (int i = 0; i < 200; ++i) d.push_back(testutil::scored("n" + std::to_string(i), "s", "t", 4));
  auto out = enforce_zero_cap(d, 1.0 / 3, 8);
  auto h = histogram(out);
  CHECK(h[0] == 100);
  CHECK(h[4] == 200);
  // Surviving records keep their relative order.
  std::vector<std::string> expected;
  std::set<std::string> kept;
  for (const auto& r : out) kept.insert(r.id.str());
  for (const auto& r : d)
    if (kept.count(r.id.str())) expected.push_back(r.id.str());
  for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i].id.str() == expected[i]);

  // Already under the cap: unchanged.
  Dataset small(d.begin() + 150, d.end());
  CHECK(enforce_zero_cap(small, 1.0 / 3, 8).size() == small.size());

  CHECK_THROWS_AS(enforce_zero_cap(d, 0.0, 1), InvalidArgument);
  CHECK_THROWS_AS(enforce_zero_cap(d, 1.0, 1), InvalidArgument);
  Dataset zeros(d.begin(), d.begin() + 10);
  CHECK_THROWS_AS(enforce_zero_cap(zeros, 0.3, 1), CapInfeasible);
}
