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

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "qeforge/corpus.hpp"

namespace qeforge::ingest {

struct UsageExample {
  std::string headword;
  std::string part_of_speech;
  std::string example_sentence;
};

struct TranslatorId {
  std::string name;
  // Lower value wins ties; priorities are unique within an engine list.
  int priority = 0;

  friend bool operator==(const TranslatorId&, const TranslatorId&) = default;
};

struct Translation {
  TranslatorId engine;
  std::string text;

  friend bool operator==(const Translation&, const Translation&) = default;
};

struct CandidateSet {
  SegmentId id;
  std::string source;
  std::vector<Translation> translations;

  friend bool operator==(const CandidateSet&, const CandidateSet&) = default;
};

// Throws InvalidArgument on duplicate names or priorities, or fewer than two
// translations / empty source.
void validate(const CandidateSet& set);

// Sentence-generation prompt for an external LLM, filled from one dictionary
// usage example.
std::string build_generation_prompt(const UsageExample& example,
                                    int min_words = 20);

// Stateless plugin contract for MT engines.
class Translator {
 public:
  virtual ~Translator() = default;
  virtual std::string translate(std::string_view engine,
                                std::string_view source_text) const = 0;
};

// Per-engine behaviour of the mock. Transforms apply in field order to the
// base text (the reference translation when one is registered for the
// source, else the source itself).
struct MockEngineBehavior {
  // Probability that a word is replaced by a substitute word.
  double substitution_rate = 0.0;
  // Drop every k-th word (1-based); 0 disables.
  int drop_every = 0;
  bool fail = false;
};

// Deterministic stand-in for real MT engines: every random decision is a
// hash of (seed, engine, source, word position), so repeated calls and
// concurrent calls agree.
class MockTranslator final : public Translator {
 public:
  explicit MockTranslator(std::uint64_t seed) : seed_(seed) {}

  void set_behavior(const std::string& engine, MockEngineBehavior behavior);
  void add_reference(std::string source, std::string target);
  // Words substitutions are drawn from; an empty pool falls back to
  // synthetic "w<hex>" tokens.
  void set_substitution_pool(std::vector<std::string> words);

  std::string translate(std::string_view engine,
                        std::string_view source_text) const override;

 private:
  std::uint64_t seed_;
  std::map<std::string, MockEngineBehavior, std::less<>> behaviors_;
  std::unordered_map<std::string, std::string> references_;
  std::vector<std::string> substitution_pool_;
};

// Translates `source` with every engine (concurrently) and returns the
// candidates in priority order. Throws EngineFailure naming the first
// failing engine in priority order; partial results are discarded.
CandidateSet translate_all(const SegmentId& id, const std::string& source,
                           const std::vector<TranslatorId>& engines,
                           const Translator& client);

// Professionally translated pairs enter at score 5 with origin
// professional. Ids are <prefix>-<row>, zero-padded. Throws EmptyField with
// the 1-based row index.
Dataset ingest_professional_corpus(
    const std::vector<std::pair<std::string, std::string>>& pairs,
    std::string_view id_prefix = "pro");

// Zero-padded id for row `index` (1-based) so lexicographic order matches
// row order.
SegmentId row_id(std::string_view prefix, std::size_t index);

// File readers. Rows must have exactly the documented column count and no
// empty cells; failures throw ParseError with the 1-based row number. Blank
// lines are skipped.
std::vector<UsageExample> read_usage_examples(const std::string& path);
std::vector<std::pair<std::string, std::string>> read_parallel_tsv(
    const std::string& path);
std::vector<std::string> read_sentences(const std::string& path);

// Candidate-set file: id, source, then (engine, priority, text) triples,
// tab-separated with corpus escaping.
std::string encode_candidate_set(const CandidateSet& set);
CandidateSet decode_candidate_set(std::string_view line);
std::vector<CandidateSet> read_candidate_sets(const std::string& path);
void write_candidate_sets(const std::string& path,
                          const std::vector<CandidateSet>& sets);

// Parses "name:priority,name:priority,...".
std::vector<TranslatorId> parse_engine_list(std::string_view spec);

}  // namespace qeforge::ingest
