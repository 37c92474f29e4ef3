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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>

#include "qeforge/annotation.hpp"
#include "qeforge/bleu.hpp"
#include "qeforge/corpus.hpp"
#include "qeforge/errors.hpp"
#include "qeforge/evaluation.hpp"
#include "qeforge/fixture.hpp"
#include "qeforge/morph.hpp"
#include "qeforge/perturbation.hpp"
#include "qeforge/pipeline.hpp"
#include "qeforge/random.hpp"
#include "qeforge/sampler.hpp"

namespace py = pybind11;
using namespace qeforge;

namespace {

std::optional<std::string> parent_of(const ScoredSegment& s) {
  if (!s.parent) return std::nullopt;
  return s.parent->str();
}

sampling::DistributionSpec spec_from(const std::string& name) {
  return sampling::parse_spec(name);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Native core of qeforge";

  py::register_exception<Error>(m, "Error", PyExc_ValueError);

  py::class_<ScoredSegment>(m, "Record")
      .def(py::init([](const std::string& id, const std::string& source,
                       const std::string& target, std::optional<int> score,
                       const std::string& origin) {
             ScoredSegment s;
             s.id = SegmentId(id);
             s.source = source;
             s.target = target;
             if (score) s.score = QualityScore(*score);
             auto o = parse_origin(origin);
             if (!o) throw InvalidArgument("unknown origin '" + origin + "'");
             s.origin = *o;
             return s;
           }),
           py::arg("id"), py::arg("source"), py::arg("target"),
           py::arg("score") = py::none(), py::arg("origin") = "human_ranked")
      .def_property_readonly("id", [](const ScoredSegment& s) { return s.id.str(); })
      .def_readonly("source", &ScoredSegment::source)
      .def_readonly("target", &ScoredSegment::target)
      .def_property_readonly("score",
                             [](const ScoredSegment& s) -> std::optional<int> {
                               if (!s.score) return std::nullopt;
                               return s.score->value();
                             })
      .def_property_readonly("origin",
                             [](const ScoredSegment& s) { return std::string(to_string(s.origin)); })
      .def_property_readonly("parent", &parent_of)
      .def_readonly("error_count", &ScoredSegment::error_count)
      .def("__eq__", [](const ScoredSegment& a, const ScoredSegment& b) { return a == b; })
      .def("__repr__", [](const ScoredSegment& s) { return "Record(" + encode_record(s) + ")"; });

  m.def("sentence_bleu",
        [](const std::string& hyp, const std::string& ref, int max_order, double epsilon) {
          bleu::BleuConfig cfg;
          cfg.max_order = max_order;
          cfg.smoothing_epsilon = epsilon;
          cfg.validate();
          return bleu::sentence_bleu(hyp, ref, cfg);
        },
        py::arg("hypothesis"), py::arg("reference"), py::arg("max_order") = 4,
        py::arg("epsilon") = 0.1);
  m.def("symmetric_agreement",
        [](const std::string& a, const std::string& b) { return bleu::symmetric_agreement(a, b); });
  m.def("pearson", [](const std::vector<double>& x, const std::vector<double>& y) {
    return eval::pearson(x, y);
  });

  m.def("encode_dataset", &encode_dataset);
  m.def("decode_dataset", [](const std::string& text) { return decode_dataset(text); });
  m.def("read_dataset", &read_dataset);
  m.def("write_dataset", &write_dataset);
  m.def("manifest", [](const Dataset& d) { return manifest_to_text(build_manifest(d)); });

  py::class_<morph::MorphLexicon>(m, "MorphLexicon")
      .def_static("parse", [](const std::string& text) { return morph::MorphLexicon::parse(text); })
      .def_static("load", &morph::MorphLexicon::load)
      .def("__len__", &morph::MorphLexicon::size);

  m.def("augment_morph",
        [](const Dataset& d, const morph::MorphLexicon& lex, const std::string& plan,
           std::uint64_t seed) { return morph::augment_corpus(d, lex, morph::parse_plan(plan), seed); },
        py::arg("records"), py::arg("lexicon"), py::arg("plan"), py::arg("seed"));
  m.def("perturb_batch",
        [](const ScoredSegment& seg, std::size_t batch, std::uint64_t seed) {
          Rng rng(seed);
          return perturb::perturb_batch(seg, batch, rng).variants;
        },
        py::arg("record"), py::arg("batch_size") = perturb::kDefaultBatchSize, py::arg("seed"));
  m.def("mismatches",
        [](const Dataset& d, std::size_t count, std::uint64_t seed) {
          Rng rng(seed);
          return perturb::generate_mismatches(d, count, rng);
        },
        py::arg("records"), py::arg("count"), py::arg("seed"));

  m.def("sample",
        [](const Dataset& pool, const std::string& spec, std::size_t size, std::uint64_t seed) {
          if (spec == "random") return sampling::random_sample(pool, size, seed);
          return sampling::sample_by_spec(pool, spec_from(spec), size, seed);
        },
        py::arg("pool"), py::arg("spec"), py::arg("size"), py::arg("seed"));
  m.def("enforce_zero_cap", &sampling::enforce_zero_cap, py::arg("records"),
        py::arg("cap") = 1.0 / 3.0, py::arg("seed"));

  m.def("lint_source", [](const std::string& text) {
    return std::string(annotation::to_string(annotation::lint_source(text)));
  });

  m.def("write_fixture",
        [](const std::string& dir, std::uint64_t seed) {
          fixture::FixtureConfig cfg;
          cfg.seed = seed;
          fixture::write_fixture(fixture::make_fixture(cfg), dir);
        },
        py::arg("directory"), py::arg("seed"));

  m.def("run_pipeline",
        [](const std::string& input_dir, const std::string& out_dir, std::uint64_t seed,
           const std::string& config_text, bool overwrite) {
          pipeline::PipelineConfig cfg;
          pipeline::apply_config_text(cfg, config_text, "config");
          cfg.seed = seed;
          auto result = pipeline::run_pipeline(
              cfg, pipeline::inputs_from_fixture_dir(input_dir), out_dir, overwrite);
          return eval::report_to_json(result.report);
        },
        py::arg("input_dir"), py::arg("out_dir"), py::arg("seed"),
        py::arg("config") = "", py::arg("overwrite") = false,
        "Runs every stage; returns the experiment report as JSON text.");
}
