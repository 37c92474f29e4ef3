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

#include "qeforge/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>
#include <vector>

#include "qeforge/errors.hpp"
#include "qeforge/random.hpp"
#include "qeforge/text.hpp"

namespace qeforge::sampling {

namespace {

void check_ids_unique(const Dataset& pool) {
  std::unordered_set<std::string> ids;
  ids.reserve(pool.size());
  for (const auto& r : pool)
    if (!ids.insert(r.id.str()).second)
      throw InvariantViolation("duplicate record id '" + r.id.str() + "'");
}

}  // namespace

DistributionSpec::DistributionSpec(std::array<double, QualityScore::kClasses> p)
    : p_(p) {
  double sum = 0.0;
  for (double v : p_) {
    if (!(v >= 0.0) || !std::isfinite(v))
      throw InvalidArgument("distribution proportions must be finite and >= 0");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw InvalidArgument("distribution proportions must sum to 1, got " +
                          text::format_double(sum));
}

DistributionSpec uniform_spec() {
  std::array<double, 6> p;
  p.fill(1.0 / 6.0);
  return DistributionSpec(p);
}

DistributionSpec normal_spec() {
  return DistributionSpec({1.0 / 32, 5.0 / 32, 10.0 / 32, 10.0 / 32, 5.0 / 32,
                           1.0 / 32});
}

DistributionSpec skewed_spec(int major_score, double major_share) {
  if (major_score < 0 || major_score > 5)
    throw InvalidArgument("skew class must lie in 0..5");
  if (!(major_share >= 0.0 && major_share <= 1.0))
    throw InvalidArgument("skew share must lie in [0, 1]");
  std::array<double, 6> p;
  p.fill((1.0 - major_share) / 5.0);
  p[static_cast<std::size_t>(major_score)] = major_share;
  return DistributionSpec(p);
}

DistributionSpec parse_spec(std::string_view name) {
  if (name == "uniform") return uniform_spec();
  if (name == "normal") return normal_spec();
  if (name == "skew3") return skewed_spec(3, 0.9);
  auto parts = text::split(name, ',');
  if (parts.size() != 6)
    throw InvalidArgument("unknown distribution spec '" + std::string(name) +
                          "'");
  std::array<double, 6> w{};
  double sum = 0.0;
  for (std::size_t i = 0; i < 6; ++i) {
    auto v = text::parse_double(text::trim(parts[i]));
    if (!v || *v < 0.0)
      throw InvalidArgument("bad weight in spec '" + std::string(name) + "'");
    w[i] = *v;
    sum += *v;
  }
  if (!(sum > 0.0)) throw InvalidArgument("spec weights sum to zero");
  for (auto& v : w) v /= sum;
  return DistributionSpec(w);
}

std::array<std::size_t, 6> quotas(const DistributionSpec& spec,
                                  std::size_t size) {
  std::array<std::size_t, 6> q{};
  std::array<double, 6> remainder{};
  std::size_t assigned = 0;
  for (int k = 0; k < 6; ++k) {
    const double exact = spec[k] * static_cast<double>(size);
    // Snap values within rounding noise of an integer before flooring, so
    // 320 * 10/32 yields 100 rather than 99.
    double floor_v = std::floor(exact + 1e-9);
    q[static_cast<std::size_t>(k)] = static_cast<std::size_t>(floor_v);
    remainder[static_cast<std::size_t>(k)] = std::max(0.0, exact - floor_v);
    assigned += q[static_cast<std::size_t>(k)];
  }
  std::array<int, 6> order{0, 1, 2, 3, 4, 5};
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return remainder[static_cast<std::size_t>(a)] >
           remainder[static_cast<std::size_t>(b)];
  });
  for (std::size_t i = 0; assigned < size; i = (i + 1) % 6) {
    ++q[static_cast<std::size_t>(order[i])];
    ++assigned;
  }
  while (assigned > size) {
    // Only reachable through the snapping above; take back from the class
    // with the smallest remainder that still has a unit.
    for (int i = 5; i >= 0 && assigned > size; --i) {
      auto k = static_cast<std::size_t>(order[static_cast<std::size_t>(i)]);
      if (q[k] > 0) {
        --q[k];
        --assigned;
      }
    }
  }
  return q;
}

Dataset sample_by_spec(const Dataset& pool, const DistributionSpec& spec,
                       std::size_t size, std::uint64_t seed) {
  check_ids_unique(pool);
  std::array<std::vector<std::size_t>, 6> by_class;
  for (std::size_t i = 0; i < pool.size(); ++i)
    by_class[static_cast<std::size_t>(pool[i].score_value())].push_back(i);

  const auto q = quotas(spec, size);
  for (int k = 0; k < 6; ++k) {
    const auto& members = by_class[static_cast<std::size_t>(k)];
    if (q[static_cast<std::size_t>(k)] > members.size())
      throw ClassExhausted(k, q[static_cast<std::size_t>(k)], members.size());
  }

  Dataset out;
  out.reserve(size);
  for (int k = 0; k < 6; ++k) {
    auto members = by_class[static_cast<std::size_t>(k)];
    // Draw over an id-sorted view so the result does not depend on pool
    // order.
    std::sort(members.begin(), members.end(),
              [&](std::size_t a, std::size_t b) { return pool[a].id < pool[b].id; });
    Rng rng(derive_seed(seed, {"sample", std::to_string(k)}));
    auto picks = rng.sample_indices(members.size(), q[static_cast<std::size_t>(k)]);
    std::sort(picks.begin(), picks.end());
    for (auto p : picks) out.push_back(pool[members[p]]);
  }
  return out;
}

Dataset random_sample(const Dataset& pool, std::size_t size,
                      std::uint64_t seed) {
  if (size > pool.size())
    throw PoolTooSmall("requested " + std::to_string(size) +
                       " records from a pool of " + std::to_string(pool.size()));
  check_ids_unique(pool);
  Rng rng(derive_seed(seed, {"random-sample"}));
  Dataset out;
  out.reserve(size);
  for (auto i : rng.sample_indices(pool.size(), size)) out.push_back(pool[i]);
  return out;
}

std::size_t max_zeros_under_cap(std::size_t nonzero, double cap) {
  const double m = static_cast<double>(nonzero);
  auto fits = [&](std::size_t k) {
    // k / (k + m) <= cap  <=>  k (1 - cap) <= cap m, with a relative
    // tolerance so exact fractions like 1/3 are not lost to rounding.
    const double lhs = static_cast<double>(k) * (1.0 - cap);
    const double rhs = cap * m;
    return lhs <= rhs + 1e-12 * std::max(1.0, rhs);
  };
  auto k = static_cast<std::size_t>(std::floor(cap * m / (1.0 - cap)));
  while (k > 0 && !fits(k)) --k;
  while (fits(k + 1)) ++k;
  return k;
}

Dataset enforce_zero_cap(const Dataset& dataset, double cap,
                         std::uint64_t seed) {
  if (!(cap > 0.0 && cap < 1.0))
    throw InvalidArgument("zero cap must lie in (0, 1)");
  std::vector<std::size_t> zeros;
  std::size_t nonzero = 0;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    if (dataset[i].score_value() == 0)
      zeros.push_back(i);
    else
      ++nonzero;
  }
  if (dataset.empty()) return dataset;
  if (nonzero == 0)
    throw CapInfeasible("dataset holds only score-0 records; no subset of "
                        "zeros satisfies the cap");
  const std::size_t keep = max_zeros_under_cap(nonzero, cap);
  if (zeros.size() <= keep) return dataset;

  Rng rng(derive_seed(seed, {"zero-cap"}));
  std::vector<bool> kept(dataset.size(), true);
  for (auto z : zeros) kept[z] = false;
  for (auto p : rng.sample_indices(zeros.size(), keep)) kept[zeros[p]] = true;

  Dataset out;
  out.reserve(nonzero + keep);
  for (std::size_t i = 0; i < dataset.size(); ++i)
    if (kept[i]) out.push_back(dataset[i]);
  return out;
}

}  // namespace qeforge::sampling
