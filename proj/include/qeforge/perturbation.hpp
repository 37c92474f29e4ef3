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

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qeforge/corpus.hpp"
#include "qeforge/random.hpp"

namespace qeforge::perturb {

inline constexpr std::size_t kDefaultBatchSize = 20;

using Tokens = std::vector<std::string>;

struct Variant {
  Tokens tokens;
  std::size_t position;

  friend bool operator==(const Variant&, const Variant&) = default;
};

// Tokens i and i+1 exchanged, for every i; identity results are dropped.
// Throws TooShort below 2 tokens.
std::vector<Variant> adjacent_swap_variants(const Tokens& tokens);

// Token i removed and reinserted so it lands at index i+2, for every i with
// i+2 in range; identity results are dropped. Throws TooShort below 3 tokens.
std::vector<Variant> shift_two_variants(const Tokens& tokens);

// Number of distinct orderings of the token multiset, saturating at
// `cap`.
std::uint64_t distinct_permutations(const Tokens& tokens,
                                    std::uint64_t cap = UINT64_MAX);

struct BatchResult {
  Dataset variants;
  std::size_t swaps = 0;
  std::size_t shifts = 0;
  std::size_t shuffles = 0;
  // Set when the permutation space ran out before batch_size.
  bool cannot_fill = false;
};

// Word-order batch for one segment: adjacent swaps (-1), then shift-twos
// (-2), truncated at batch_size, then distinct random shuffles (-3) to fill
// the remainder. All variants are pairwise distinct and differ from the
// parent. Throws TooShort under 2 tokens, InvalidArgument for
// batch_size < 1.
BatchResult perturb_batch(const ScoredSegment& seg, std::size_t batch_size,
                          Rng& rng);

// Source of one segment paired with the target of another whose source and
// target both differ; score 0, origin mismatch, id <source id>#neg#<k>.
// Throws PoolTooSmall when no such pairing exists, InvalidArgument for
// count < 1.
Dataset generate_mismatches(const Dataset& segs, std::size_t count, Rng& rng);

}  // namespace qeforge::perturb
