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

#include <fcntl.h>
#include <sys/stat.h>
#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cstring>
#include <mutex>

#include "qeforge/annotation.hpp"
#include "qeforge/errors.hpp"
#include "qeforge/text.hpp"

namespace qeforge::annotation {

namespace {

constexpr std::size_t kLogFields = 8;

bool contains_ci(std::string_view haystack, std::string_view needle) {
  auto it = std::search(haystack.begin(), haystack.end(), needle.begin(),
                        needle.end(), [](char a, char b) {
                          return std::tolower(static_cast<unsigned char>(a)) ==
                                 std::tolower(static_cast<unsigned char>(b));
                        });
  return it != haystack.end();
}

// Returns false on malformed UTF-8 or any code point we treat as noise.
bool clean_utf8(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size()) {
    const auto c = static_cast<unsigned char>(s[i]);
    std::uint32_t cp;
    std::size_t len;
    if (c < 0x80) {
      cp = c;
      len = 1;
    } else if ((c & 0xE0) == 0xC0) {
      cp = c & 0x1F;
      len = 2;
    } else if ((c & 0xF0) == 0xE0) {
      cp = c & 0x0F;
      len = 3;
    } else if ((c & 0xF8) == 0xF0) {
      cp = c & 0x07;
      len = 4;
    } else {
      return false;
    }
    if (i + len > s.size()) return false;
    for (std::size_t k = 1; k < len; ++k) {
      const auto cc = static_cast<unsigned char>(s[i + k]);
      if ((cc & 0xC0) != 0x80) return false;
      cp = (cp << 6) | (cc & 0x3F);
    }
    if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) ||
        (len == 4 && cp < 0x10000) || cp > 0x10FFFF ||
        (cp >= 0xD800 && cp <= 0xDFFF))
      return false;
    if (cp < 0x20 || cp == 0x7F || (cp >= 0x80 && cp <= 0x9F)) return false;
    if (cp == 0xFFFD) return false;
    i += len;
  }
  return true;
}

}  // namespace

std::string_view to_string(Severity s) {
  switch (s) {
    case Severity::kNeutral: return "neutral";
    case Severity::kMinor: return "minor";
    case Severity::kMajor: return "major";
  }
  return "neutral";
}

std::optional<Severity> parse_severity(std::string_view s) {
  if (s == "neutral") return Severity::kNeutral;
  if (s == "minor") return Severity::kMinor;
  if (s == "major") return Severity::kMajor;
  return std::nullopt;
}

std::string_view to_string(SourceFlag f) {
  return f == SourceFlag::kClean ? "clean" : "irrelevant_chars";
}

std::optional<SourceFlag> parse_source_flag(std::string_view s) {
  if (s == "clean") return SourceFlag::kClean;
  if (s == "irrelevant_chars") return SourceFlag::kIrrelevantChars;
  return std::nullopt;
}

SourceFlag lint_source(std::string_view text) {
  if (!clean_utf8(text)) return SourceFlag::kIrrelevantChars;
  // UTF-8 read as Latin-1 and re-encoded: "â€" and "Ã" + continuation.
  if (text.find("\xC3\xA2\xE2\x82\xAC") != std::string_view::npos)
    return SourceFlag::kIrrelevantChars;
  for (std::size_t pos = text.find("\xC3\x83"); pos != std::string_view::npos;
       pos = text.find("\xC3\x83", pos + 1)) {
    if (pos + 2 < text.size() &&
        (text[pos + 2] == '\xC2' || text[pos + 2] == '\xC3'))
      return SourceFlag::kIrrelevantChars;
  }
  for (char c : text) {
    switch (c) {
      case '$': case '\\': case '^': case '{': case '}': case '=': case '<':
      case '>':
        return SourceFlag::kIrrelevantChars;
      default:
        break;
    }
  }
  return SourceFlag::kClean;
}

int AnnotationRecord::effective_score() const {
  return source_flag == SourceFlag::kIrrelevantChars
             ? std::min(score, kFlaggedSourceCap)
             : score;
}

bool AnnotationRecord::translation_reviewed() const {
  return !(score == 1 && comment && contains_ci(*comment, "source illogical"));
}

std::string encode_log_line(const AnnotationRecord& rec) {
  std::string sev;
  for (auto s : rec.severities) {
    if (!sev.empty()) sev += ',';
    sev += to_string(s);
  }
  std::string line = std::to_string(rec.sequence_number);
  auto field = [&](std::string_view v) {
    line += '\t';
    line += text::escape_field(v);
  };
  field(rec.segment_id.str());
  field(rec.annotator);
  field(std::to_string(rec.score));
  field(sev);
  field(to_string(rec.source_flag));
  field(rec.comment.value_or(""));
  field(rec.client_token.value_or(""));
  return line;
}

AnnotationRecord decode_log_line(std::string_view line) {
  auto raw = text::split(line, '\t');
  if (raw.size() != kLogFields)
    throw MalformedRecord("annotation log line has " +
                          std::to_string(raw.size()) + " fields, expected " +
                          std::to_string(kLogFields));
  std::vector<std::string> f;
  for (auto r : raw) {
    auto v = text::unescape_field(r);
    if (!v) throw MalformedRecord("bad escape in annotation log");
    f.push_back(std::move(*v));
  }
  AnnotationRecord rec;
  auto seq = text::parse_uint64(f[0]);
  auto score = text::parse_int(f[3]);
  auto flag = parse_source_flag(f[5]);
  if (!seq || !score || !flag || f[1].empty() || f[2].empty())
    throw MalformedRecord("bad annotation log line");
  rec.sequence_number = *seq;
  rec.segment_id = SegmentId(f[1]);
  rec.annotator = f[2];
  rec.score = static_cast<int>(*score);
  if (!f[4].empty()) {
    for (auto s : text::split(f[4], ',')) {
      auto sev = parse_severity(s);
      if (!sev) throw MalformedRecord("unknown severity '" + std::string(s) + "'");
      rec.severities.push_back(*sev);
    }
  }
  rec.source_flag = *flag;
  if (!f[6].empty()) rec.comment = f[6];
  if (!f[7].empty()) rec.client_token = f[7];
  return rec;
}

AnnotationStore::AnnotationStore(Dataset queue, std::string log_path)
    : queue_(std::move(queue)), log_path_(std::move(log_path)) {
  std::sort(queue_.begin(), queue_.end(),
            [](const auto& a, const auto& b) { return a.id < b.id; });
  for (std::size_t i = 0; i < queue_.size(); ++i)
    if (!index_.emplace(queue_[i].id.str(), i).second)
      throw InvariantViolation("duplicate segment id '" + queue_[i].id.str() +
                               "' in annotation queue");
  replay();
  fd_ = ::open(log_path_.c_str(), O_WRONLY | O_APPEND | O_CREAT | O_CLOEXEC,
               0644);
  if (fd_ < 0)
    throw Error("cannot open annotation log '" + log_path_ +
                "': " + std::strerror(errno));
}

AnnotationStore::~AnnotationStore() {
  if (fd_ >= 0) ::close(fd_);
}

void AnnotationStore::replay() {
  std::string content;
  try {
    content = text::read_file(log_path_);
  } catch (const Error&) {
    return;  // no log yet
  }
  std::size_t good = 0;
  std::size_t start = 0;
  std::size_t row = 0;
  while (start < content.size()) {
    std::size_t end = content.find('\n', start);
    if (end == std::string::npos) break;  // torn write from a crash
    ++row;
    std::string_view line(content.data() + start, end - start);
    if (!line.empty()) {
      AnnotationRecord rec;
      try {
        rec = decode_log_line(line);
      } catch (const MalformedRecord& e) {
        throw ParseError(log_path_, row, e.what());
      }
      if (!index_.count(rec.segment_id.str()))
        throw ParseError(log_path_, row,
                         "log refers to segment '" + rec.segment_id.str() +
                             "' which is not in the dataset");
      apply(rec);
    }
    start = end + 1;
    good = start;
  }
  if (good < content.size() && ::truncate(log_path_.c_str(),
                                          static_cast<off_t>(good)) != 0)
    throw Error("cannot truncate torn annotation log '" + log_path_ + "'");
}

void AnnotationStore::apply(const AnnotationRecord& rec) {
  const std::size_t idx = records_.size();
  records_.push_back(rec);
  const auto key = std::make_pair(rec.segment_id.str(), rec.annotator);
  auto it = latest_.find(key);
  if (it == latest_.end() ||
      records_[it->second].sequence_number < rec.sequence_number)
    latest_[key] = idx;
  done_by_annotator_[rec.annotator].insert(rec.segment_id.str());
  if (rec.client_token)
    tokens_[{rec.annotator, rec.segment_id.str(), *rec.client_token}] =
        rec.sequence_number;
  next_sequence_ = std::max(next_sequence_, rec.sequence_number + 1);
}

Acknowledgment AnnotationStore::submit(const Submission& s) {
  if (s.annotator.empty() || text::is_blank(s.annotator))
    throw ValidationError("annotator", "must be a non-empty name");
  if (s.score < 1 || s.score > 5)
    throw ValidationError("score", "must be an integer from 1 to 5");
  if (s.client_token && s.client_token->empty())
    throw ValidationError("client_token", "must not be empty when given");

  std::unique_lock lock(mu_);
  auto found = index_.find(s.segment_id);
  if (found == index_.end()) throw UnknownSegment(s.segment_id);

  if (s.client_token) {
    auto t = tokens_.find({s.annotator, s.segment_id, *s.client_token});
    if (t != tokens_.end()) return {t->second, true};
  }

  AnnotationRecord rec;
  rec.segment_id = SegmentId(s.segment_id);
  rec.annotator = s.annotator;
  rec.score = s.score;
  rec.severities = s.severities;
  rec.source_flag = lint_source(queue_[found->second].source);
  if (s.comment && !s.comment->empty()) rec.comment = s.comment;
  rec.client_token = s.client_token;
  rec.sequence_number = next_sequence_;

  const std::string line = encode_log_line(rec) + "\n";
  std::size_t written = 0;
  while (written < line.size()) {
    ssize_t n = ::write(fd_, line.data() + written, line.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw Error(std::string("annotation log write failed: ") +
                  std::strerror(errno));
    }
    written += static_cast<std::size_t>(n);
  }
  if (::fsync(fd_) != 0)
    throw Error(std::string("annotation log fsync failed: ") +
                std::strerror(errno));

  apply(rec);
  return {rec.sequence_number, false};
}

std::optional<ScoredSegment> AnnotationStore::next_segment(
    const std::string& annotator) const {
  std::shared_lock lock(mu_);
  auto done = done_by_annotator_.find(annotator);
  for (const auto& seg : queue_) {
    if (done == done_by_annotator_.end() || !done->second.count(seg.id.str()))
      return seg;
  }
  return std::nullopt;
}

Progress AnnotationStore::progress() const {
  std::shared_lock lock(mu_);
  Progress p;
  p.total = queue_.size();
  for (const auto& [annotator, ids] : done_by_annotator_)
    p.annotated_by_annotator[annotator] = ids.size();
  return p;
}

Dataset AnnotationStore::export_ranked(
    const std::optional<std::string>& primary) const {
  std::shared_lock lock(mu_);
  // segment -> chosen record index
  std::map<std::string, std::size_t> chosen;
  for (const auto& [key, idx] : latest_) {
    const auto& [segment, annotator] = key;
    auto it = chosen.find(segment);
    if (it == chosen.end()) {
      chosen[segment] = idx;
      continue;
    }
    const auto& current = records_[it->second];
    const auto& candidate = records_[idx];
    const bool current_primary = primary && current.annotator == *primary;
    const bool candidate_primary = primary && candidate.annotator == *primary;
    if (candidate_primary != current_primary) {
      if (candidate_primary) it->second = idx;
    } else if (candidate.sequence_number > current.sequence_number) {
      it->second = idx;
    }
  }

  Dataset out;
  out.reserve(chosen.size());
  for (const auto& seg : queue_) {
    auto it = chosen.find(seg.id.str());
    if (it == chosen.end()) continue;
    ScoredSegment r;
    r.id = seg.id;
    r.source = seg.source;
    r.target = seg.target;
    r.score = QualityScore(records_[it->second].effective_score());
    r.origin = Origin::kHumanRanked;
    r.engine = seg.engine;
    r.agreement = seg.agreement;
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<AnnotationRecord> AnnotationStore::records() const {
  std::shared_lock lock(mu_);
  return records_;
}

}  // namespace qeforge::annotation
