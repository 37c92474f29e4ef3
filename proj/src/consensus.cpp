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

#include "qeforge/consensus.hpp"

#include <algorithm>
#include <tuple>

#include "qeforge/errors.hpp"
#include "qeforge/text.hpp"

namespace qeforge::consensus {

namespace {

std::vector<ingest::Translation> by_priority(const ingest::CandidateSet& set) {
  auto ordered = set.translations;
  std::sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
    return a.engine.priority < b.engine.priority;
  });
  return ordered;
}

}  // namespace

PairwiseAgreements pairwise_agreements(const ingest::CandidateSet& set,
                                       const bleu::BleuConfig& cfg) {
  ingest::validate(set);
  const auto ordered = by_priority(set);
  PairwiseAgreements out;
  for (std::size_t i = 0; i < ordered.size(); ++i)
    for (std::size_t j = i + 1; j < ordered.size(); ++j)
      out[{ordered[i].engine.name, ordered[j].engine.name}] =
          bleu::symmetric_agreement(ordered[i].text, ordered[j].text, cfg);
  return out;
}

ConsensusResult decide(const ingest::CandidateSet& set,
                       const PairwiseAgreements& agreements, double threshold) {
  if (!(threshold > 0.0 && threshold <= 1.0))
    throw InvalidArgument("consensus threshold must lie in (0, 1]");
  ingest::validate(set);
  const auto ordered = by_priority(set);

  ConsensusResult result;
  result.all_pairwise = agreements;

  // Candidate key: (-agreement, priority sum, first name, second name),
  // minimized.
  using Key = std::tuple<double, int, std::string, std::string>;
  std::optional<Key> best;
  std::size_t best_i = 0;
  std::size_t best_j = 0;
  for (std::size_t i = 0; i < ordered.size(); ++i) {
    for (std::size_t j = i + 1; j < ordered.size(); ++j) {
      auto it = agreements.find({ordered[i].engine.name, ordered[j].engine.name});
      if (it == agreements.end())
        throw InvalidArgument("missing agreement for engine pair (" +
                              ordered[i].engine.name + ", " +
                              ordered[j].engine.name + ")");
      Key key{-it->second, ordered[i].engine.priority + ordered[j].engine.priority,
              ordered[i].engine.name, ordered[j].engine.name};
      if (!best || key < *best) {
        best = key;
        best_i = i;
        best_j = j;
      }
    }
  }

  const double best_agreement = -std::get<0>(*best);
  if (best_agreement < threshold) return result;

  result.excluded = false;
  result.selected = SelectedPair{ordered[best_i].engine, ordered[best_j].engine,
                                 ordered[best_i].text, best_agreement};
  return result;
}

ConsensusResult apply_consensus(const ingest::CandidateSet& set,
                                double threshold, const bleu::BleuConfig& cfg) {
  return decide(set, pairwise_agreements(set, cfg), threshold);
}

FilterOutput filter_candidates(const std::vector<ingest::CandidateSet>& sets,
                               double threshold, const bleu::BleuConfig& cfg) {
  FilterOutput out;
  for (const auto& set : sets) {
    auto result = apply_consensus(set, threshold, cfg);
    if (result.excluded) {
      double best = 0.0;
      for (const auto& [pair, value] : result.all_pairwise)
        best = std::max(best, value);
      out.rejected.push_back({set.id, set.source, best});
      continue;
    }
    ScoredSegment seg;
    seg.id = set.id;
    seg.source = set.source;
    seg.target = result.selected->canonical_target;
    seg.origin = Origin::kConsensusFiltered;
    seg.engine = result.selected->first.name;
    seg.agreement = result.selected->agreement;
    out.kept.push_back(std::move(seg));
  }
  auto by_id = [](const auto& a, const auto& b) { return a.id < b.id; };
  std::sort(out.kept.begin(), out.kept.end(), by_id);
  std::sort(out.rejected.begin(), out.rejected.end(), by_id);
  return out;
}

std::string encode_rejections(const std::vector<FilterOutput::Rejection>& rows) {
  std::string out;
  for (const auto& r : rows) {
    out += text::escape_field(r.id.str());
    out += '\t';
    out += text::escape_field(r.source);
    out += '\t';
    out += text::format_double(r.best_agreement);
    out += '\n';
  }
  return out;
}

}  // namespace qeforge::consensus
