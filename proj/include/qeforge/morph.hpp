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

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "qeforge/corpus.hpp"
#include "qeforge/random.hpp"

namespace qeforge::morph {

enum class Gender { kMasculine, kFeminine, kNone };
enum class Number { kSingular, kPlural, kNone };

struct Features {
  Gender gender = Gender::kNone;
  Number number = Number::kNone;

  friend auto operator<=>(const Features&, const Features&) = default;
};

std::string to_string(Features f);  // "m.sg", "f.pl", "none.sg", ...
std::optional<Features> parse_features(std::string_view text);

struct MorphEntry {
  std::string surface;
  Features features;
  // Every inflection of the lexeme, including the surface's own slot.
  std::map<Features, std::string> variants;
};

// One agreement error: the form that differs from the entry in exactly one
// feature (gender xor number).
struct Alternative {
  Features features;
  std::string form;
};

// Single-feature flips whose text differs from the surface, deduplicated by
// text.
std::vector<Alternative> alternatives(const MorphEntry& entry);

class MorphLexicon {
 public:
  // Throws InvariantViolation when the surface is missing from or
  // contradicts its own slot, or when the entry has no other slot. A
  // surface already present keeps its first entry.
  void add(MorphEntry entry);

  const MorphEntry* find(std::string_view surface) const;
  std::size_t size() const { return entries_.size(); }

  // TSV: surface, gender, number, then one or more `gender.number=form`
  // cells (cells may also hold several comma-separated pairs). Gender is
  // m|f|none, number sg|pl|none. '#' starts a comment line.
  static MorphLexicon parse(std::string_view content,
                            const std::string& name = "");
  static MorphLexicon load(const std::string& path);

 private:
  std::unordered_map<std::string, MorphEntry> entries_;
};

// Word tokens as used by augmentation: whitespace-separated, punctuation
// left attached. Lookup ignores leading/trailing punctuation.
std::vector<std::string> word_tokens(std::string_view text);

struct InjectionSite {
  std::size_t position;
  const MorphEntry* entry;
};

// Positions (strictly increasing) whose token is a lexicon surface with at
// least one single-feature alternative.
std::vector<InjectionSite> find_injection_sites(
    const std::vector<std::string>& tokens, const MorphLexicon& lex);

// Replaces `n` distinct sites (n in {1, 2}) with a one-feature flip each.
// Score becomes clamp(score - n, 1, 5). Throws InvalidArgument for other n,
// ScoreTooLow when seg.score < 2 and InsufficientSites.
ScoredSegment inject_errors(const ScoredSegment& seg, int n,
                            const MorphLexicon& lex, Rng& rng,
                            std::size_t ordinal = 0);

// Number of textually distinct n-error variants a target admits.
std::size_t variant_capacity(const std::vector<std::string>& tokens,
                             const MorphLexicon& lex, int n);

// Requested variant counts per error level. nullopt means one variant for
// every eligible segment.
struct MorphPlan {
  std::map<int, std::optional<std::size_t>> counts;
};

// "1:100,2:50" or "1:*,2:*". Empty string gives an empty plan.
MorphPlan parse_plan(std::string_view spec);
std::string to_string(const MorphPlan& plan);

// Emits every input record followed by its variants. Variants are spread
// round-robin over eligible segments (score >= 2, enough sites) in a seeded
// order; each segment's variants are distinct and drawn from a generator
// derived from (seed, segment id, level). Throws PlanInfeasible.
Dataset augment_corpus(const Dataset& segs, const MorphLexicon& lex,
                       const MorphPlan& plan, std::uint64_t seed);

// Tokens whose gender or number disagrees with the sentence majority, per
// feature (ties count the smaller side).
int agreement_conflicts(const std::vector<std::string>& tokens,
                        const MorphLexicon& lex);

}  // namespace qeforge::morph
