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

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qeforge/bleu.hpp"
#include "qeforge/corpus.hpp"
#include "qeforge/ingestion.hpp"

namespace qeforge::consensus {

inline constexpr double kDefaultThreshold = 0.85;

// Key is (higher-priority engine name, lower-priority engine name).
using PairwiseAgreements = std::map<std::pair<std::string, std::string>, double>;

struct SelectedPair {
  ingest::TranslatorId first;   // higher priority (lower number)
  ingest::TranslatorId second;
  std::string canonical_target;  // first's translation
  double agreement = 0.0;
};

struct ConsensusResult {
  std::optional<SelectedPair> selected;
  bool excluded = true;
  PairwiseAgreements all_pairwise;
};

// One entry per unordered engine pair, via symmetric BLEU agreement.
PairwiseAgreements pairwise_agreements(const ingest::CandidateSet& set,
                                       const bleu::BleuConfig& cfg = {});

// Decision rule over precomputed agreements: exclude when the best pair is
// below threshold, else pick the best pair. Exact ties go to the lowest sum
// of priorities, then lexicographic engine names. Throws InvalidArgument
// unless 0 < threshold <= 1 or if an agreement is missing.
ConsensusResult decide(const ingest::CandidateSet& set,
                       const PairwiseAgreements& agreements, double threshold);

ConsensusResult apply_consensus(const ingest::CandidateSet& set,
                                double threshold = kDefaultThreshold,
                                const bleu::BleuConfig& cfg = {});

struct FilterOutput {
  Dataset kept;  // origin consensus_filtered, unscored
  struct Rejection {
    SegmentId id;
    std::string source;
    double best_agreement;
  };
  std::vector<Rejection> rejected;
};

// Applies the rule to every set; output ordered by segment id.
FilterOutput filter_candidates(const std::vector<ingest::CandidateSet>& sets,
                               double threshold = kDefaultThreshold,
                               const bleu::BleuConfig& cfg = {});

std::string encode_rejections(const std::vector<FilterOutput::Rejection>& rows);

}  // namespace qeforge::consensus
