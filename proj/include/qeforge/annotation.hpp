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
#include <memory>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "qeforge/corpus.hpp"

namespace qeforge::annotation {

enum class Severity { kNeutral, kMinor, kMajor };
enum class SourceFlag { kClean, kIrrelevantChars };

std::string_view to_string(Severity s);
std::optional<Severity> parse_severity(std::string_view s);
std::string_view to_string(SourceFlag f);
std::optional<SourceFlag> parse_source_flag(std::string_view s);

// Flags sources carrying control or replacement characters, invalid UTF-8,
// mojibake, markup, or inline math / formula fragments ($ \ ^ { } = < >).
SourceFlag lint_source(std::string_view text);

// Sources with irrelevant characters are capped at this score whatever the
// translation quality.
inline constexpr int kFlaggedSourceCap = 3;

struct AnnotationRecord {
  SegmentId segment_id;
  std::string annotator;
  int score = 0;  // raw score as submitted
  std::vector<Severity> severities;
  SourceFlag source_flag = SourceFlag::kClean;
  std::optional<std::string> comment;
  std::uint64_t sequence_number = 0;
  // Client-chosen token; a resubmission with the same (annotator, segment,
  // token) is acknowledged without a second log entry.
  std::optional<std::string> client_token;

  int effective_score() const;
  // A 1 with a "source illogical" comment means the translation itself was
  // not reviewed.
  bool translation_reviewed() const;

  friend bool operator==(const AnnotationRecord&,
                         const AnnotationRecord&) = default;
};

std::string encode_log_line(const AnnotationRecord& rec);
AnnotationRecord decode_log_line(std::string_view line);

struct Submission {
  std::string segment_id;
  std::string annotator;
  int score = 0;
  std::vector<Severity> severities;
  std::optional<std::string> comment;
  std::optional<std::string> client_token;
};

struct Acknowledgment {
  std::uint64_t sequence_number = 0;
  bool duplicate = false;
};

struct Progress {
  std::size_t total = 0;
  std::map<std::string, std::size_t> annotated_by_annotator;
};

// Queue of segments plus the append-only judgment log. Submissions are
// serialized through one appender and acknowledged only after the log line
// is fsync'ed; reads share a lock and see a consistent snapshot. Reopening
// replays the log (a torn final line is discarded and truncated).
class AnnotationStore {
 public:
  AnnotationStore(Dataset queue, std::string log_path);
  ~AnnotationStore();

  AnnotationStore(const AnnotationStore&) = delete;
  AnnotationStore& operator=(const AnnotationStore&) = delete;

  // Throws UnknownSegment and ValidationError.
  Acknowledgment submit(const Submission& submission);

  // Lowest-id segment this annotator has not scored; nullopt when done.
  std::optional<ScoredSegment> next_segment(const std::string& annotator) const;

  Progress progress() const;

  // One human_ranked record per annotated segment, ordered by id, carrying
  // the effective score of the chosen judgment: the primary annotator's
  // latest if they scored the segment, else the latest overall.
  Dataset export_ranked(const std::optional<std::string>& primary = {}) const;

  std::vector<AnnotationRecord> records() const;
  const std::string& log_path() const { return log_path_; }

 private:
  void replay();
  void apply(const AnnotationRecord& rec);

  mutable std::shared_mutex mu_;
  std::vector<ScoredSegment> queue_;  // sorted by id
  std::unordered_map<std::string, std::size_t> index_;
  std::string log_path_;
  int fd_ = -1;
  std::vector<AnnotationRecord> records_;
  // (segment, annotator) -> index into records_ of the latest judgment.
  std::map<std::pair<std::string, std::string>, std::size_t> latest_;
  std::map<std::string, std::set<std::string>> done_by_annotator_;
  std::map<std::tuple<std::string, std::string, std::string>, std::uint64_t>
      tokens_;
  std::uint64_t next_sequence_ = 1;
};

// Static reference page with the ranking scale, severity levels and
// source-text rules.
std::string rubric_html();

// HTTP front end for an AnnotationStore.
class AnnotationService {
 public:
  struct Options {
    std::optional<std::string> primary_annotator;
    // Directory served at "/" (the browser client), if any.
    std::optional<std::string> static_dir;
  };

  AnnotationService(AnnotationStore& store, Options options);
  ~AnnotationService();

  AnnotationService(const AnnotationService&) = delete;
  AnnotationService& operator=(const AnnotationService&) = delete;

  // Binds (port 0 picks a free port) and returns the bound port, or -1.
  int bind(const std::string& host, int port);
  // Blocks serving requests until stop().
  bool listen();
  void stop();
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace qeforge::annotation
