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

#include <httplib.h>

#include <condition_variable>
#include <mutex>
#include "json.hpp"

#include "qeforge/annotation.hpp"
#include "qeforge/errors.hpp"

namespace qeforge::annotation {

namespace {

using nlohmann::json;

constexpr const char* kJson = "application/json";

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), kJson);
}

void send_field_error(httplib::Response& res, const std::string& field,
                      const std::string& message) {
  send_json(res, 422,
            {{"error", "validation"},
             {"fields", json::array({{{"field", field}, {"message", message}}})}});
}

// Parses the POST body into a Submission; throws ValidationError naming the
// offending field.
Submission parse_submission(const std::string& segment_id,
                            const std::string& body) {
  json doc;
  try {
    doc = json::parse(body);
  } catch (const json::parse_error&) {
    throw ValidationError("body", "not valid JSON");
  }
  if (!doc.is_object()) throw ValidationError("body", "expected an object");

  Submission s;
  s.segment_id = segment_id;
  auto ann = doc.find("annotator");
  if (ann == doc.end() || !ann->is_string())
    throw ValidationError("annotator", "required string");
  s.annotator = ann->get<std::string>();

  auto score = doc.find("score");
  if (score == doc.end() || !score->is_number_integer())
    throw ValidationError("score", "required integer");
  const auto raw = score->get<long long>();
  if (raw < 1 || raw > 5)
    throw ValidationError("score", "must be an integer from 1 to 5");
  s.score = static_cast<int>(raw);

  if (auto sev = doc.find("severities"); sev != doc.end() && !sev->is_null()) {
    if (!sev->is_array())
      throw ValidationError("severities", "expected an array");
    for (const auto& v : *sev) {
      if (!v.is_string())
        throw ValidationError("severities", "entries must be strings");
      auto parsed = parse_severity(v.get<std::string>());
      if (!parsed)
        throw ValidationError("severities",
                              "unknown level '" + v.get<std::string>() + "'");
      s.severities.push_back(*parsed);
    }
  }
  if (auto c = doc.find("comment"); c != doc.end() && !c->is_null()) {
    if (!c->is_string()) throw ValidationError("comment", "expected a string");
    s.comment = c->get<std::string>();
  }
  if (auto t = doc.find("client_token"); t != doc.end() && !t->is_null()) {
    if (!t->is_string())
      throw ValidationError("client_token", "expected a string");
    s.client_token = t->get<std::string>();
  }
  return s;
}

}  // namespace

struct AnnotationService::Impl {
  AnnotationStore& store;
  Options options;
  httplib::Server server;

  Impl(AnnotationStore& s, Options o) : store(s), options(std::move(o)) {
    routes();
  }

  void routes() {
    server.Get("/api/segments/next", [this](const httplib::Request& req,
                                            httplib::Response& res) {
      const auto annotator = req.get_param_value("annotator");
      if (annotator.empty()) {
        send_field_error(res, "annotator", "query parameter required");
        return;
      }
      auto seg = store.next_segment(annotator);
      if (!seg) {
        res.status = 204;
        return;
      }
      send_json(res, 200,
                {{"segment_id", seg->id.str()},
                 {"source", seg->source},
                 {"target", seg->target},
                 {"source_flag",
                  std::string(to_string(lint_source(seg->source)))}});
    });

    server.Post("/api/segments/:id/annotation",
                [this](const httplib::Request& req, httplib::Response& res) {
                  const auto id = req.path_params.at("id");
                  try {
                    auto ack = store.submit(parse_submission(id, req.body));
                    send_json(res, ack.duplicate ? 200 : 201,
                              {{"sequence_number", ack.sequence_number},
                               {"duplicate", ack.duplicate}});
                  } catch (const ValidationError& e) {
                    send_field_error(res, e.field(), e.what());
                  } catch (const UnknownSegment& e) {
                    send_json(res, 404,
                              {{"error", "unknown_segment"}, {"message", e.what()}});
                  }
                });

    server.Get("/api/progress",
               [this](const httplib::Request&, httplib::Response& res) {
                 auto p = store.progress();
                 json by = json::object();
                 for (const auto& [name, n] : p.annotated_by_annotator)
                   by[name] = n;
                 send_json(res, 200,
                           {{"total", p.total}, {"annotated_by_annotator", by}});
               });

    server.Get("/api/export",
               [this](const httplib::Request&, httplib::Response& res) {
                 res.status = 200;
                 res.set_content(
                     encode_dataset(store.export_ranked(options.primary_annotator)),
                     "text/tab-separated-values; charset=utf-8");
               });

    server.Get("/rubric", [](const httplib::Request&, httplib::Response& res) {
      res.set_content(rubric_html(), "text/html; charset=utf-8");
    });

    server.set_exception_handler([](const httplib::Request&,
                                    httplib::Response& res,
                                    std::exception_ptr ep) {
      std::string msg = "internal error";
      try {
        std::rethrow_exception(ep);
      } catch (const std::exception& e) {
        msg = e.what();
      } catch (...) {
      }
      send_json(res, 500, {{"error", "internal"}, {"message", msg}});
    });

    if (options.static_dir) server.set_mount_point("/", *options.static_dir);
  }
};

AnnotationService::AnnotationService(AnnotationStore& store, Options options)
    : impl_(std::make_unique<Impl>(store, std::move(options))) {}

AnnotationService::~AnnotationService() { stop(); }

int AnnotationService::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool AnnotationService::listen() { return impl_->server.listen_after_bind(); }

void AnnotationService::stop() {
  if (impl_) impl_->server.stop();
}

void AnnotationService::wait_until_ready() const {
  impl_->server.wait_until_ready();
}

std::string rubric_html() {
  return R"(<!doctype html>
<html lang="en">
<head><meta charset="utf-8"><title>Ranking rubric</title></head>
<body>
<h1>Ranking rubric</h1>
<h2>Scores</h2>
<ol>
<li><b>1</b>: unusable. Meaning lost or output unrelated to the source.
Also used when the source itself makes no sense; add the comment
<code>source illogical</code> and skip reviewing the translation.</li>
<li><b>2</b>: several major problems; the gist is hard to recover.</li>
<li><b>3</b>: understandable with one major problem or many minor ones.
Pick 2 or 3 according to how bad the problems are.</li>
<li><b>4</b>: correct meaning with minor problems only.</li>
<li><b>5</b>: correct and fluent; nothing to fix.</li>
</ol>
<h2>Severity marks</h2>
<ul>
<li><b>neutral</b>: acceptable choice, no effect on quality.</li>
<li><b>minor</b>: inaccurate wording, agreement or word-order slips that
keep the meaning.</li>
<li><b>major</b>: wrong or missing meaning, or a problem that blocks
understanding.</li>
</ul>
<h2>Source text</h2>
<p>Sources containing stray symbols, markup, formula fragments, control
characters or broken encoding are flagged automatically. A flagged source
counts as at most 3 no matter how good the translation is.</p>
</body>
</html>
)";
}

}  // namespace qeforge::annotation
