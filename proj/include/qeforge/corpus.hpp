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
#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qeforge {

// Opaque record identifier, unique within a dataset. Perturbed variants get
// derived ids of the form <parent>#<op>#<n>.
class SegmentId {
 public:
  SegmentId() = default;
  explicit SegmentId(std::string value) : value_(std::move(value)) {}

  const std::string& str() const { return value_; }
  bool empty() const { return value_.empty(); }

  friend auto operator<=>(const SegmentId&, const SegmentId&) = default;
  friend bool operator==(const SegmentId&, const SegmentId&) = default;

 private:
  std::string value_;
};

SegmentId derived_id(const SegmentId& parent, std::string_view op,
                     std::size_t ordinal);

// Integer quality score. 0 is reserved for mismatched pairs; people score
// on 1..5.
class QualityScore {
 public:
  static constexpr int kMin = 0;
  static constexpr int kMax = 5;
  static constexpr int kClasses = 6;

  // Throws InvariantViolation outside [0, 5].
  explicit QualityScore(int value);

  int value() const { return value_; }

  friend auto operator<=>(const QualityScore&, const QualityScore&) = default;
  friend bool operator==(const QualityScore&, const QualityScore&) = default;

 private:
  int value_;
};

// Score after a penalty, floored at 1 so that 0 stays a pure
// unrelated-pair class.
int clamp_penalized(int parent_score, int penalty);

enum class Origin {
  kHumanRanked,
  kProfessional,
  kConsensusFiltered,
  kMorphError,
  kOrderSwap,
  kOrderShift2,
  kOrderShuffle,
  kMismatch,
};

inline constexpr std::array<Origin, 8> kAllOrigins = {
    Origin::kHumanRanked, Origin::kProfessional, Origin::kConsensusFiltered,
    Origin::kMorphError,  Origin::kOrderSwap,    Origin::kOrderShift2,
    Origin::kOrderShuffle, Origin::kMismatch};

std::string_view to_string(Origin origin);
std::optional<Origin> parse_origin(std::string_view name);

// Penalty implied by a perturbation origin; nullopt for origins that carry
// no parent (morph_error's penalty is its error_count and is handled by the
// caller).
std::optional<int> order_penalty(Origin origin);

bool has_lineage(Origin origin);

struct ScoredSegment {
  SegmentId id;
  std::string source;
  std::string target;
  // Absent only for consensus-filtered records awaiting annotation.
  std::optional<QualityScore> score;
  Origin origin = Origin::kHumanRanked;
  std::optional<SegmentId> parent;
  std::optional<std::string> engine;
  // Inter-engine agreement of the consensus pair, in [0, 1].
  std::optional<double> agreement;
  int error_count = 0;

  int score_value() const;  // throws InvariantViolation when unscored

  friend bool operator==(const ScoredSegment&, const ScoredSegment&) = default;
};

using Dataset = std::vector<ScoredSegment>;

// Checks every per-record invariant. Throws InvariantViolation.
void validate(const ScoredSegment& seg);

// One TSV line without the trailing LF. Field order: id, source, target,
// score, origin, parent, engine, agreement, error_count. Absent optionals
// are empty fields.
std::string encode_record(const ScoredSegment& seg);

// Throws MalformedRecord on syntax errors and InvariantViolation on
// well-formed lines that break a record invariant.
ScoredSegment decode_record(std::string_view line);

std::string encode_dataset(const Dataset& records);
Dataset decode_dataset(std::string_view content, const std::string& name = "");
Dataset read_dataset(const std::string& path);
void write_dataset(const std::string& path, const Dataset& records);

// Lineage problems found by replaying the score law against parents that
// are present in the same dataset. Empty when the dataset is consistent.
std::vector<std::string> check_lineage(const Dataset& records);

struct StageEntry {
  std::string name;
  std::vector<std::pair<std::string, std::string>> params;

  friend bool operator==(const StageEntry&, const StageEntry&) = default;
};

struct DatasetManifest {
  std::array<std::size_t, QualityScore::kClasses> counts_per_score{};
  // Records without a score (consensus-filtered, not yet annotated).
  std::size_t unscored = 0;
  std::map<Origin, std::size_t> counts_per_origin;
  std::uint64_t seed = 0;
  std::vector<StageEntry> stage_log;
  std::vector<std::string> notes;

  std::size_t total() const;

  friend bool operator==(const DatasetManifest&,
                         const DatasetManifest&) = default;
};

DatasetManifest build_manifest(const Dataset& records);

std::string manifest_to_text(const DatasetManifest& manifest);
DatasetManifest manifest_from_text(std::string_view text);

inline std::string manifest_path_for(const std::string& dataset_path) {
  return dataset_path + ".manifest";
}

}  // namespace qeforge
