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

#include "qeforge/perturbation.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "qeforge/errors.hpp"
#include "qeforge/morph.hpp"
#include "qeforge/text.hpp"

namespace qeforge::perturb {

namespace {

// Above this many distinct orderings, shuffles are drawn by rejection
// instead of enumerating the space.
constexpr std::uint64_t kEnumerationLimit = 40320;

ScoredSegment make_variant(const ScoredSegment& parent, const Tokens& tokens,
                           Origin origin, std::string_view op,
                           std::size_t ordinal) {
  ScoredSegment v;
  v.id = derived_id(parent.id, op, ordinal);
  v.source = parent.source;
  v.target = text::join(tokens, " ");
  v.score = QualityScore(
      clamp_penalized(parent.score_value(), *order_penalty(origin)));
  v.origin = origin;
  v.parent = parent.id;
  return v;
}

bool pair_ok(const ScoredSegment& a, const ScoredSegment& b) {
  return a.source != b.source && a.target != b.target;
}

}  // namespace

std::vector<Variant> adjacent_swap_variants(const Tokens& tokens) {
  if (tokens.size() < 2) throw TooShort("adjacent swap needs >= 2 tokens");
  std::vector<Variant> out;
  for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
    if (tokens[i] == tokens[i + 1]) continue;
    Tokens v = tokens;
    std::swap(v[i], v[i + 1]);
    out.push_back({std::move(v), i});
  }
  return out;
}

std::vector<Variant> shift_two_variants(const Tokens& tokens) {
  if (tokens.size() < 3) throw TooShort("shift-two needs >= 3 tokens");
  std::vector<Variant> out;
  for (std::size_t i = 0; i + 2 < tokens.size(); ++i) {
    Tokens v = tokens;
    std::string moved = std::move(v[i]);
    v.erase(v.begin() + static_cast<std::ptrdiff_t>(i));
    v.insert(v.begin() + static_cast<std::ptrdiff_t>(i + 2), std::move(moved));
    if (v == tokens) continue;
    out.push_back({std::move(v), i});
  }
  return out;
}

std::uint64_t distinct_permutations(const Tokens& tokens, std::uint64_t cap) {
  std::map<std::string, std::uint64_t> groups;
  for (const auto& t : tokens) ++groups[t];
  unsigned __int128 total = 1;
  std::uint64_t placed = 0;
  for (const auto& [token, count] : groups) {
    // Multiply in C(placed + count, count), built incrementally so every
    // intermediate value is an exact integer.
    unsigned __int128 binom = 1;
    for (std::uint64_t k = 1; k <= count; ++k) {
      ++placed;
      binom = binom * placed / k;
      if (binom > cap) return cap;
    }
    total *= binom;
    if (total > cap) return cap;
  }
  return static_cast<std::uint64_t>(total);
}

BatchResult perturb_batch(const ScoredSegment& seg, std::size_t batch_size,
                          Rng& rng) {
  if (batch_size < 1) throw InvalidArgument("batch size must be >= 1");
  const Tokens tokens = morph::word_tokens(seg.target);
  if (tokens.size() < 2)
    throw TooShort("segment '" + seg.id.str() + "' has fewer than 2 words");

  BatchResult result;
  std::set<Tokens> seen{tokens};
  auto full = [&] { return result.variants.size() >= batch_size; };

  for (const auto& v : adjacent_swap_variants(tokens)) {
    if (full()) break;
    if (!seen.insert(v.tokens).second) continue;
    result.variants.push_back(
        make_variant(seg, v.tokens, Origin::kOrderSwap, "swap", v.position));
    ++result.swaps;
  }
  if (tokens.size() >= 3) {
    for (const auto& v : shift_two_variants(tokens)) {
      if (full()) break;
      if (!seen.insert(v.tokens).second) continue;
      result.variants.push_back(
          make_variant(seg, v.tokens, Origin::kOrderShift2, "shift2", v.position));
      ++result.shifts;
    }
  }
  if (full()) return result;

  const std::size_t remaining = batch_size - result.variants.size();
  const std::uint64_t space = distinct_permutations(tokens);
  const std::uint64_t available = space - seen.size();

  std::vector<Tokens> picked;
  if (space <= kEnumerationLimit) {
    std::vector<Tokens> candidates;
    Tokens perm = tokens;
    std::sort(perm.begin(), perm.end());
    do {
      if (!seen.count(perm)) candidates.push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
    const std::size_t take = std::min<std::size_t>(remaining, candidates.size());
    for (std::size_t idx : rng.sample_indices(candidates.size(), take))
      picked.push_back(std::move(candidates[idx]));
    result.cannot_fill = available < remaining;
  } else {
    while (picked.size() < remaining) {
      Tokens perm = tokens;
      rng.shuffle(perm);
      if (seen.insert(perm).second) picked.push_back(std::move(perm));
    }
  }
  for (std::size_t k = 0; k < picked.size(); ++k) {
    result.variants.push_back(
        make_variant(seg, picked[k], Origin::kOrderShuffle, "shuffle", k));
    ++result.shuffles;
  }
  return result;
}

Dataset generate_mismatches(const Dataset& segs, std::size_t count, Rng& rng) {
  if (count < 1) throw InvalidArgument("mismatch count must be >= 1");
  const std::size_t n = segs.size();

  bool any_pair = false;
  for (std::size_t i = 0; i < n && !any_pair; ++i)
    for (std::size_t j = i + 1; j < n && !any_pair; ++j)
      any_pair = pair_ok(segs[i], segs[j]);
  if (!any_pair)
    throw PoolTooSmall("mismatch pool needs two segments with different "
                       "sources and targets");

  Dataset out;
  out.reserve(count);
  std::vector<std::size_t> valid;
  while (out.size() < count) {
    const std::size_t i = rng.index(n);
    std::optional<std::size_t> chosen;
    for (int attempt = 0; attempt < 32 && !chosen; ++attempt) {
      std::size_t j = rng.index(n);
      if (j != i && pair_ok(segs[i], segs[j])) chosen = j;
    }
    if (!chosen) {
      valid.clear();
      for (std::size_t j = 0; j < n; ++j)
        if (j != i && pair_ok(segs[i], segs[j])) valid.push_back(j);
      if (valid.empty()) continue;
      chosen = valid[rng.index(valid.size())];
    }
    ScoredSegment neg;
    neg.id = derived_id(segs[i].id, "neg", out.size());
    neg.source = segs[i].source;
    neg.target = segs[*chosen].target;
    neg.score = QualityScore(0);
    neg.origin = Origin::kMismatch;
    out.push_back(std::move(neg));
  }
  return out;
}

}  // namespace qeforge::perturb
