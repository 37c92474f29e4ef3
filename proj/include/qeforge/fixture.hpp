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
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qeforge/corpus.hpp"
#include "qeforge/ingestion.hpp"

// A small synthetic English -> Hebrew world used by demos and tests: a
// template grammar over a toy dictionary, a matching morphological lexicon
// and glossary, simulated MT engines that share systematic errors, and a
// simulated annotator that scores against gold references.
namespace qeforge::fixture {

struct FixtureConfig {
  std::uint64_t seed = 42;
  std::size_t sentences = 800;     // machine-translated sources
  std::size_t professional = 600;  // professionally translated pairs
  std::size_t usage_examples = 40;
  // Share of sources that get a formula fragment spliced in.
  double flagged_share = 0.01;
};

struct EngineSpec {
  ingest::TranslatorId id;
  ingest::MockEngineBehavior behavior;
};

struct Fixture {
  std::vector<std::string> sentences;
  // source -> the output every mock engine starts from (with systematic
  // errors already applied).
  std::vector<std::pair<std::string, std::string>> engine_base;
  // source -> correct translation.
  std::vector<std::pair<std::string, std::string>> gold;
  std::vector<std::pair<std::string, std::string>> professional;
  std::vector<ingest::UsageExample> usage_examples;
  std::vector<EngineSpec> engines;
  std::string lexicon_tsv;
  std::string glossary_tsv;
};

Fixture make_fixture(const FixtureConfig& config);

// File names inside a fixture directory.
inline constexpr std::string_view kSentencesFile = "sentences.txt";
inline constexpr std::string_view kEngineBaseFile = "engine_base.tsv";
inline constexpr std::string_view kGoldFile = "gold.tsv";
inline constexpr std::string_view kProfessionalFile = "professional.tsv";
inline constexpr std::string_view kUsageExamplesFile = "usage_examples.tsv";
inline constexpr std::string_view kEnginesFile = "engines.tsv";
inline constexpr std::string_view kLexiconFile = "lexicon.tsv";
inline constexpr std::string_view kGlossaryFile = "glossary.tsv";

void write_fixture(const Fixture& fixture, const std::string& dir);
Fixture read_fixture(const std::string& dir);

// engines.tsv rows: name, priority, substitution_rate, drop_every.
std::vector<EngineSpec> parse_engines(std::string_view content,
                                      const std::string& name = "");
std::string engines_to_text(const std::vector<EngineSpec>& engines);

ingest::MockTranslator make_translator(const Fixture& fixture,
                                       std::uint64_t seed);

std::size_t token_edit_distance(const std::vector<std::string>& a,
                                const std::vector<std::string>& b);

// Scores a translation 5 minus its word edit distance to the gold
// reference, floored at 1, with occasional seeded +-1 disagreement.
class SimulatedAnnotator {
 public:
  SimulatedAnnotator(const std::vector<std::pair<std::string, std::string>>& gold,
                     std::uint64_t seed, double noise = 0.1);

  // Throws InvalidArgument when the source has no gold reference.
  int judge(const ScoredSegment& seg) const;

 private:
  std::map<std::string, std::string, std::less<>> gold_;
  std::uint64_t seed_;
  double noise_;
};

}  // namespace qeforge::fixture
