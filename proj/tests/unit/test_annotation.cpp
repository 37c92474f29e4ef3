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

#include <fstream>
#include <thread>

#include "doctest.h"
#include "httplib.h"
#include "json.hpp"
#include "qeforge/annotation.hpp"
#include "qeforge/corpus.hpp"
#include "qeforge/errors.hpp"
#include "qeforge/text.hpp"
#include "unit/helpers.hpp"

using namespace qeforge;
using namespace qeforge::annotation;
using nlohmann::json;

namespace {

Dataset queue() {
  Dataset q;
  q.push_back(testutil::scored("seg-3", "The dog runs.", "הכלב רץ.", 0));
  q.push_back(testutil::scored("seg-1", "The cat sleeps.", "החתול ישן.", 0));
  q.push_back(testutil::scored("seg-2", "Solve $x^2 = 4$ now.", "פתור עכשיו.", 0));
  for (auto& s : q) s.score.reset();
  return q;
}

Submission sub(const std::string& seg, const std::string& who, int score,
               const std::string& token) {
  Submission s;
  s.segment_id = seg;
  s.annotator = who;
  s.score = score;
  s.client_token = token;
  return s;
}

}  // namespace

TEST_CASE("source lint") {
  CHECK(lint_source("The cat sleeps on the mat.") == SourceFlag::kClean);
  CHECK(lint_source("Don't stop, it's fine!") == SourceFlag::kClean);
  CHECK(lint_source("Café au lait") == SourceFlag::kClean);
  CHECK(lint_source("Solve $x$ now") == SourceFlag::kIrrelevantChars);
  CHECK(lint_source("a <b>bold</b> word") == SourceFlag::kIrrelevantChars);
  CHECK(lint_source("x = 4") == SourceFlag::kIrrelevantChars);
  CHECK(lint_source("\\frac{1}{2}") == SourceFlag::kIrrelevantChars);
  CHECK(lint_source("bad\x01 control") == SourceFlag::kIrrelevantChars);
  CHECK(lint_source("bad \xff byte") == SourceFlag::kIrrelevantChars);
  CHECK(lint_source("replacement \xEF\xBF\xBD char") == SourceFlag::kIrrelevantChars);
  CHECK(lint_source("Itâ€™s mojibake") == SourceFlag::kIrrelevantChars);
  CHECK(lint_source("CafÃ© again") == SourceFlag::kIrrelevantChars);
}

TEST_CASE("effective score and review flag") {
  AnnotationRecord r;
  r.score = 5;
  CHECK(r.effective_score() == 5);
  r.source_flag = SourceFlag::kIrrelevantChars;
  CHECK(r.effective_score() == kFlaggedSourceCap);
  r.score = 2;
  CHECK(r.effective_score() == 2);

  AnnotationRecord one;
  one.score = 1;
  CHECK(one.translation_reviewed());
  one.comment = "Source Illogical, cannot judge";
  CHECK_FALSE(one.translation_reviewed());
  one.score = 2;
  CHECK(one.translation_reviewed());
}

TEST_CASE("enum text forms") {
  for (auto s : {Severity::kNeutral, Severity::kMinor, Severity::kMajor})
    CHECK(parse_severity(to_string(s)) == s);
  for (auto f : {SourceFlag::kClean, SourceFlag::kIrrelevantChars})
    CHECK(parse_source_flag(to_string(f)) == f);
  CHECK_FALSE(parse_severity("catastrophic"));
}

TEST_CASE("log line codec round-trips awkward text") {
  AnnotationRecord r;
  r.segment_id = SegmentId("seg-9");
  r.annotator = "ann\tone";
  r.score = 4;
  r.severities = {Severity::kMinor, Severity::kMajor};
  r.source_flag = SourceFlag::kIrrelevantChars;
  r.comment = "line one\nline two \\ done";
  r.sequence_number = 17;
  r.client_token = "tok-1";
  auto line = encode_log_line(r);
  CHECK(line.find('\n') == std::string::npos);
  CHECK(decode_log_line(line) == r);

  AnnotationRecord bare;
  bare.segment_id = SegmentId("s");
  bare.annotator = "a";
  bare.score = 3;
  bare.sequence_number = 1;
  CHECK(decode_log_line(encode_log_line(bare)) == bare);
  CHECK_THROWS_AS(decode_log_line("1\tonly\tthree"), MalformedRecord);
}

TEST_CASE("store queue, submit and progress") {
  testutil::TempDir dir;
  AnnotationStore store(queue(), dir.file("log"));
  auto next = store.next_segment("ann");
  REQUIRE(next);
  CHECK(next->id.str() == "seg-1");

  auto ack = store.submit(sub("seg-1", "ann", 4, "t1"));
  CHECK(ack.sequence_number == 1);
  CHECK_FALSE(ack.duplicate);
  auto again = store.submit(sub("seg-1", "ann", 4, "t1"));
  CHECK(again.duplicate);
  CHECK(again.sequence_number == 1);
  CHECK(store.records().size() == 1);

  CHECK(store.next_segment("ann")->id.str() == "seg-2");
  CHECK(store.next_segment("other")->id.str() == "seg-1");
  store.submit(sub("seg-2", "ann", 5, "t2"));
  store.submit(sub("seg-3", "ann", 2, "t3"));
  CHECK_FALSE(store.next_segment("ann"));

  auto p = store.progress();
  CHECK(p.total == 3);
  CHECK(p.annotated_by_annotator.at("ann") == 3);
}

TEST_CASE("store validation") {
  testutil::TempDir dir;
  AnnotationStore store(queue(), dir.file("log"));
  auto check_field = [&](Submission s, const std::string& field) {
    try {
      store.submit(s);
      FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
      CHECK(e.field() == field);
    }
  };
  check_field(sub("seg-1", "", 3, "t"), "annotator");
  check_field(sub("seg-1", "a", 0, "t"), "score");
  check_field(sub("seg-1", "a", 6, "t"), "score");
  check_field(sub("seg-1", "a", 3, ""), "client_token");
  CHECK_THROWS_AS(store.submit(sub("nope", "a", 3, "t")), UnknownSegment);
  CHECK(store.records().empty());

  Dataset dup = queue();
  dup.push_back(dup.front());
  CHECK_THROWS(AnnotationStore(dup, dir.file("log2")));
}

TEST_CASE("export applies the flagged-source cap and picks a judgment") {
  testutil::TempDir dir;
  AnnotationStore store(queue(), dir.file("log"));
  store.submit(sub("seg-2", "ann", 5, "a"));
  store.submit(sub("seg-1", "ann", 2, "b"));
  store.submit(sub("seg-1", "lead", 4, "c"));
  store.submit(sub("seg-1", "ann", 3, "d"));

  auto latest = store.export_ranked();
  REQUIRE(latest.size() == 2);
  CHECK(latest[0].id.str() == "seg-1");
  CHECK(latest[0].score_value() == 3);
  CHECK(latest[0].origin == Origin::kHumanRanked);
  CHECK(latest[1].score_value() == 3);  // raw 5 on a flagged source

  auto primary = store.export_ranked(std::string("lead"));
  CHECK(primary[0].score_value() == 4);
  CHECK(primary[1].score_value() == 3);
}

TEST_CASE("replay restores state and drops a torn tail") {
  testutil::TempDir dir;
  const auto log = dir.file("log");
  Dataset before;
  {
    AnnotationStore store(queue(), log);
    store.submit(sub("seg-1", "ann", 4, "a"));
    store.submit(sub("seg-2", "ann", 5, "b"));
    before = store.export_ranked();
  }
  const auto good = text::read_file(log);
  {
    std::ofstream out(log, std::ios::app | std::ios::binary);
    out << "3\tseg-3\tann\t4";  // no newline: a torn write
  }
  {
    AnnotationStore store(queue(), log);
    CHECK(store.export_ranked() == before);
    CHECK(store.records().size() == 2);
    CHECK(text::read_file(log) == good);
    CHECK(store.submit(sub("seg-1", "ann", 4, "a")).duplicate);
    CHECK(store.submit(sub("seg-3", "ann", 1, "c")).sequence_number == 3);
  }
  {
    std::ofstream out(log, std::ios::app | std::ios::binary);
    out << "garbage line\n";
  }
  CHECK_THROWS_AS(AnnotationStore(queue(), log), ParseError);
}

TEST_CASE("HTTP round trip") {
  testutil::TempDir dir;
  AnnotationStore store(queue(), dir.file("log"));
  AnnotationService service(store, {});
  const int port = service.bind("127.0.0.1", 0);
  REQUIRE(port > 0);
  std::thread server([&] { service.listen(); });
  service.wait_until_ready();
  httplib::Client cli("127.0.0.1", port);

  auto next = cli.Get("/api/segments/next?annotator=ann");
  REQUIRE(next);
  CHECK(next->status == 200);
  auto nj = json::parse(next->body);
  CHECK(nj["segment_id"] == "seg-1");
  CHECK(nj["source_flag"] == "clean");

  auto missing = cli.Get("/api/segments/next");
  REQUIRE(missing);
  CHECK(missing->status == 422);

  json body = {{"annotator", "ann"}, {"score", 5}, {"severities", json::array()},
               {"client_token", "x1"}};
  auto post = cli.Post("/api/segments/seg-2/annotation", body.dump(), "application/json");
  REQUIRE(post);
  CHECK(post->status == 201);
  CHECK(json::parse(post->body)["sequence_number"] == 1);
  auto dup = cli.Post("/api/segments/seg-2/annotation", body.dump(), "application/json");
  REQUIRE(dup);
  CHECK(dup->status == 200);
  CHECK(json::parse(dup->body)["duplicate"] == true);

  json bad = {{"annotator", "ann"}, {"score", 9}, {"client_token", "x2"}};
  auto invalid = cli.Post("/api/segments/seg-1/annotation", bad.dump(), "application/json");
  REQUIRE(invalid);
  CHECK(invalid->status == 422);
  auto ij = json::parse(invalid->body);
  CHECK(ij["fields"][0]["field"] == "score");

  auto garbled = cli.Post("/api/segments/seg-1/annotation", "{not json", "application/json");
  REQUIRE(garbled);
  CHECK(garbled->status == 422);

  auto unknown = cli.Post("/api/segments/zzz/annotation", body.dump(), "application/json");
  REQUIRE(unknown);
  CHECK(unknown->status == 404);

  auto progress = cli.Get("/api/progress");
  REQUIRE(progress);
  auto pj = json::parse(progress->body);
  CHECK(pj["total"] == 3);
  CHECK(pj["annotated_by_annotator"]["ann"] == 1);

  auto exported = cli.Get("/api/export");
  REQUIRE(exported);
  CHECK(exported->status == 200);
  auto records = decode_dataset(exported->body);
  REQUIRE(records.size() == 1);
  CHECK(records[0].score_value() == 3);

  auto rubric = cli.Get("/rubric");
  REQUIRE(rubric);
  CHECK(rubric->status == 200);
  CHECK(rubric->body.find("<html") != std::string::npos);

  for (const char* id : {"seg-1", "seg-3"}) {
    json b = {{"annotator", "ann"}, {"score", 4}, {"client_token", std::string("t-") + id}};
    cli.Post(std::string("/api/segments/") + id + "/annotation", b.dump(), "application/json");
  }
  auto done = cli.Get("/api/segments/next?annotator=ann");
  REQUIRE(done);
  CHECK(done->status == 204);

  service.stop();
  server.join();
}
