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

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include "qeforge/corpus.hpp"

namespace qeforge::sampling {

// Target proportions over score classes 0..5.
class DistributionSpec {
 public:
  // Throws InvalidArgument unless every entry is >= 0 and they sum to 1
  // within 1e-9.
  explicit DistributionSpec(std::array<double, QualityScore::kClasses> p);

  double operator[](int score) const { return p_[static_cast<std::size_t>(score)]; }
  const std::array<double, QualityScore::kClasses>& proportions() const {
    return p_;
  }

 private:
  std::array<double, QualityScore::kClasses> p_;
};

// 1/6 per class.
DistributionSpec uniform_spec();

// Binomial(5, 1/2): {1, 5, 10, 10, 5, 1} / 32.
DistributionSpec normal_spec();

// `major_share` on one class, the rest spread evenly over the other five.
DistributionSpec skewed_spec(int major_score, double major_share);

// "uniform", "normal", "skew3" (90% on score 3) or six comma-separated
// weights normalized to sum 1. Random sampling has no spec and is handled
// by the caller.
DistributionSpec parse_spec(std::string_view text);

// Largest-remainder quotas that sum to exactly `size`; remainder ties go to
// the lower score.
std::array<std::size_t, QualityScore::kClasses> quotas(
    const DistributionSpec& spec, std::size_t size);

// Exact per-class quotas drawn uniformly without replacement within each
// class (generator per class derived from seed). Output ordered by score,
// then id. Throws ClassExhausted, InvariantViolation on unscored records or
// duplicate ids.
Dataset sample_by_spec(const Dataset& pool, const DistributionSpec& spec,
                       std::size_t size, std::uint64_t seed);

// Uniform without replacement over the whole pool, in draw order. Throws
// PoolTooSmall.
Dataset random_sample(const Dataset& pool, std::size_t size,
                      std::uint64_t seed);

// Downsamples score-0 records uniformly until their fraction is <= cap;
// everything else is kept in place. Throws InvalidArgument unless
// 0 < cap < 1, CapInfeasible when only zeros are present.
Dataset enforce_zero_cap(const Dataset& dataset, double cap,
                         std::uint64_t seed);

// Largest zero count k with k / (k + nonzero) <= cap.
std::size_t max_zeros_under_cap(std::size_t nonzero, double cap);

}  // namespace qeforge::sampling
