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

#include "qeforge/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "json.hpp"
#include "qeforge/errors.hpp"
#include "qeforge/text.hpp"

namespace qeforge {

namespace {

constexpr std::size_t kFieldCount = 9;

struct OriginName {
  Origin origin;
  std::string_view name;
};

constexpr std::array<OriginName, 8> kOriginNames = {{
    {Origin::kHumanRanked, "human_ranked"},
    {Origin::kProfessional, "professional"},
    {Origin::kConsensusFiltered, "consensus_filtered"},
    {Origin::kMorphError, "morph_error"},
    {Origin::kOrderSwap, "order_swap"},
    {Origin::kOrderShift2, "order_shift2"},
    {Origin::kOrderShuffle, "order_shuffle"},
    {Origin::kMismatch, "mismatch"},
}};

[[noreturn]] void violation(const ScoredSegment& seg, const std::string& what) {
  throw InvariantViolation("record '" + seg.id.str() + "': " + what);
}

}  // namespace

SegmentId derived_id(const SegmentId& parent, std::string_view op,
                     std::size_t ordinal) {
  std::string v = parent.str();
  v += '#';
  v += op;
  v += '#';
  v += std::to_string(ordinal);
  return SegmentId(std::move(v));
}

QualityScore::QualityScore(int value) : value_(value) {
  if (value < kMin || value > kMax)
    throw InvariantViolation("quality score " + std::to_string(value) +
                             " outside [0, 5]");
}

int clamp_penalized(int parent_score, int penalty) {
  return std::clamp(parent_score - penalty, 1, QualityScore::kMax);
}

std::string_view to_string(Origin origin) {
  for (const auto& entry : kOriginNames)
    if (entry.origin == origin) return entry.name;
  return "unknown";
}

std::optional<Origin> parse_origin(std::string_view name) {
  for (const auto& entry : kOriginNames)
    if (entry.name == name) return entry.origin;
  return std::nullopt;
}

std::optional<int> order_penalty(Origin origin) {
  switch (origin) {
    case Origin::kOrderSwap: return 1;
    case Origin::kOrderShift2: return 2;
    case Origin::kOrderShuffle: return 3;
    default: return std::nullopt;
  }
}

bool has_lineage(Origin origin) {
  return origin == Origin::kMorphError || order_penalty(origin).has_value();
}

int ScoredSegment::score_value() const {
  if (!score)
    throw InvariantViolation("record '" + id.str() + "' has no score yet");
  return score->value();
}

void validate(const ScoredSegment& seg) {
  if (seg.id.empty()) violation(seg, "empty id");
  if (seg.source.empty()) violation(seg, "empty source");
  if (seg.target.empty()) violation(seg, "empty target");

  if (seg.origin == Origin::kConsensusFiltered) {
    if (seg.score) violation(seg, "consensus_filtered records are unscored");
  } else if (!seg.score) {
    violation(seg, "missing score");
  }
  const int score = seg.score ? seg.score->value() : -1;

  if ((seg.origin == Origin::kMismatch) != (score == 0))
    violation(seg, "score 0 is reserved for, and required by, mismatch");
  if (seg.origin == Origin::kProfessional && score != 5)
    violation(seg, "professional records carry score 5");
  if (seg.origin == Origin::kHumanRanked && (score < 1 || score > 5))
    violation(seg, "human scores lie in 1..5");

  if (has_lineage(seg.origin) != seg.parent.has_value())
    violation(seg, has_lineage(seg.origin) ? "perturbed record without parent"
                                           : "unexpected parent");
  if (seg.parent && seg.parent->empty()) violation(seg, "empty parent id");
  if (seg.origin == Origin::kMorphError) {
    if (seg.error_count != 1 && seg.error_count != 2)
      violation(seg, "morph_error records carry 1 or 2 errors");
  } else if (seg.error_count != 0) {
    violation(seg, "error_count is only set on morph_error records");
  }
  if (seg.engine && seg.engine->empty()) violation(seg, "empty engine name");
  if (seg.agreement &&
      (!std::isfinite(*seg.agreement) || *seg.agreement < 0.0 ||
       *seg.agreement > 1.0))
    violation(seg, "agreement outside [0, 1]");
}

std::string encode_record(const ScoredSegment& seg) {
  validate(seg);
  std::string line;
  line.reserve(seg.source.size() + seg.target.size() + 64);
  auto field = [&](std::string_view v, bool first = false) {
    if (!first) line += '\t';
    line += text::escape_field(v);
  };
  field(seg.id.str(), true);
  field(seg.source);
  field(seg.target);
  field(seg.score ? std::to_string(seg.score->value()) : "");
  field(to_string(seg.origin));
  field(seg.parent ? seg.parent->str() : "");
  field(seg.engine ? *seg.engine : "");
  field(seg.agreement ? text::format_double(*seg.agreement) : "");
  field(std::to_string(seg.error_count));
  return line;
}

ScoredSegment decode_record(std::string_view line) {
  auto raw = text::split(line, '\t');
  if (raw.size() != kFieldCount)
    throw MalformedRecord("expected " + std::to_string(kFieldCount) +
                          " tab-separated fields, got " +
                          std::to_string(raw.size()));
  std::array<std::string, kFieldCount> f;
  for (std::size_t i = 0; i < kFieldCount; ++i) {
    auto v = text::unescape_field(raw[i]);
    if (!v)
      throw MalformedRecord("bad escape sequence in field " +
                            std::to_string(i + 1));
    f[i] = std::move(*v);
  }

  ScoredSegment seg;
  seg.id = SegmentId(f[0]);
  seg.source = f[1];
  seg.target = f[2];
  if (!f[3].empty()) {
    auto v = text::parse_int(f[3]);
    if (!v) throw MalformedRecord("score '" + f[3] + "' is not an integer");
    if (*v < QualityScore::kMin || *v > QualityScore::kMax)
      throw InvariantViolation("record '" + f[0] + "': score " + f[3] +
                               " outside [0, 5]");
    seg.score = QualityScore(static_cast<int>(*v));
  }
  auto origin = parse_origin(f[4]);
  if (!origin) throw MalformedRecord("unknown origin '" + f[4] + "'");
  seg.origin = *origin;
  if (!f[5].empty()) seg.parent = SegmentId(f[5]);
  if (!f[6].empty()) seg.engine = f[6];
  if (!f[7].empty()) {
    auto v = text::parse_double(f[7]);
    if (!v) throw MalformedRecord("agreement '" + f[7] + "' is not a number");
    seg.agreement = *v;
  }
  auto errors = text::parse_int(f[8]);
  if (!errors)
    throw MalformedRecord("error_count '" + f[8] + "' is not an integer");
  if (*errors < 0 || *errors > 1000)
    throw InvariantViolation("record '" + f[0] + "': error_count out of range");
  seg.error_count = static_cast<int>(*errors);

  validate(seg);
  return seg;
}

std::string encode_dataset(const Dataset& records) {
  std::string out;
  for (const auto& r : records) {
    out += encode_record(r);
    out += '\n';
  }
  return out;
}

Dataset decode_dataset(std::string_view content, const std::string& name) {
  Dataset out;
  std::size_t row = 0;
  std::size_t start = 0;
  while (start < content.size()) {
    ++row;
    std::size_t end = content.find('\n', start);
    if (end == std::string_view::npos) end = content.size();
    std::string_view line = content.substr(start, end - start);
    start = end + 1;
    if (line.empty()) continue;
    try {
      out.push_back(decode_record(line));
    } catch (const MalformedRecord& e) {
      throw MalformedRecord(name + ":" + std::to_string(row) + ": " + e.what());
    } catch (const InvariantViolation& e) {
      throw InvariantViolation(name + ":" + std::to_string(row) + ": " +
                               e.what());
    }
  }
  return out;
}

Dataset read_dataset(const std::string& path) {
  return decode_dataset(text::read_file(path), path);
}

void write_dataset(const std::string& path, const Dataset& records) {
  text::write_file_atomic(path, encode_dataset(records));
}

std::vector<std::string> check_lineage(const Dataset& records) {
  std::unordered_map<std::string, const ScoredSegment*> by_id;
  by_id.reserve(records.size());
  for (const auto& r : records) by_id.emplace(r.id.str(), &r);

  std::vector<std::string> problems;
  for (const auto& r : records) {
    if (!r.parent) continue;
    auto it = by_id.find(r.parent->str());
    if (it == by_id.end() || !it->second->score || !r.score) continue;
    int penalty = r.origin == Origin::kMorphError ? r.error_count
                                                  : order_penalty(r.origin).value_or(0);
    int expected = clamp_penalized(it->second->score->value(), penalty);
    if (r.score->value() != expected)
      problems.push_back(r.id.str() + ": score " +
                         std::to_string(r.score->value()) + ", expected " +
                         std::to_string(expected));
  }
  return problems;
}

std::size_t DatasetManifest::total() const {
  std::size_t n = unscored;
  for (auto c : counts_per_score) n += c;
  return n;
}

DatasetManifest build_manifest(const Dataset& records) {
  DatasetManifest m;
  for (Origin o : kAllOrigins) m.counts_per_origin[o] = 0;
  for (const auto& r : records) {
    if (r.score)
      ++m.counts_per_score[static_cast<std::size_t>(r.score->value())];
    else
      ++m.unscored;
    ++m.counts_per_origin[r.origin];
  }
  return m;
}

std::string manifest_to_text(const DatasetManifest& m) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["total"] = m.total();
  ordered_json scores = ordered_json::object();
  for (std::size_t s = 0; s < m.counts_per_score.size(); ++s)
    scores[std::to_string(s)] = m.counts_per_score[s];
  j["counts_per_score"] = scores;
  j["unscored"] = m.unscored;
  ordered_json origins = ordered_json::object();
  for (Origin o : kAllOrigins) {
    auto it = m.counts_per_origin.find(o);
    origins[std::string(to_string(o))] =
        it == m.counts_per_origin.end() ? 0 : it->second;
  }
  j["counts_per_origin"] = origins;
  j["seed"] = m.seed;
  ordered_json log = ordered_json::array();
  for (const auto& stage : m.stage_log) {
    ordered_json params = ordered_json::object();
    for (const auto& [k, v] : stage.params) params[k] = v;
    log.push_back({{"stage", stage.name}, {"params", params}});
  }
  j["stage_log"] = log;
  j["notes"] = m.notes;
  return j.dump(2) + "\n";
}

DatasetManifest manifest_from_text(std::string_view text) {
  using nlohmann::ordered_json;
  DatasetManifest m;
  try {
    auto j = ordered_json::parse(text);
    for (std::size_t s = 0; s < m.counts_per_score.size(); ++s)
      m.counts_per_score[s] =
          j.at("counts_per_score").at(std::to_string(s)).get<std::size_t>();
    m.unscored = j.at("unscored").get<std::size_t>();
    for (Origin o : kAllOrigins)
      m.counts_per_origin[o] =
          j.at("counts_per_origin").at(std::string(to_string(o))).get<std::size_t>();
    m.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& stage : j.at("stage_log")) {
      StageEntry e;
      e.name = stage.at("stage").get<std::string>();
      for (const auto& [k, v] : stage.at("params").items())
        e.params.emplace_back(k, v.get<std::string>());
      m.stage_log.push_back(std::move(e));
    }
    m.notes = j.at("notes").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw MalformedRecord(std::string("manifest: ") + e.what());
  }
  return m;
}

}  // namespace qeforge
