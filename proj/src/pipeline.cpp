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

#include "qeforge/pipeline.hpp"

#include <unistd.h>

#include <cmath>
#include <filesystem>
#include <map>

#include "qeforge/annotation.hpp"
#include "qeforge/consensus.hpp"
#include "qeforge/fixture.hpp"
#include "qeforge/ingestion.hpp"
#include "qeforge/morph.hpp"
#include "qeforge/perturbation.hpp"
#include "qeforge/random.hpp"
#include "qeforge/sampler.hpp"
#include "qeforge/text.hpp"

namespace qeforge::pipeline {

namespace fs = std::filesystem;

namespace {

std::string fmt(double v) { return text::format_double(v); }
std::string fmt(std::size_t v) { return std::to_string(v); }

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) {
    if (!out.empty()) out += ',';
    out += s;
  }
  return out;
}

template <typename T>
T parse_or_throw(std::optional<T> v, std::string_view key, std::string_view raw) {
  if (!v)
    throw ConfigError("bad value '" + std::string(raw) + "' for '" +
                      std::string(key) + "'");
  return *v;
}

std::size_t parse_size(std::string_view key, std::string_view raw) {
  return static_cast<std::size_t>(parse_or_throw(text::parse_uint64(raw), key, raw));
}

bool is_original(const ScoredSegment& r) {
  return r.origin == Origin::kHumanRanked || r.origin == Origin::kProfessional;
}

std::map<std::string, int> read_scores(const std::string& path) {
  std::map<std::string, int> out;
  auto lines = text::read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (text::is_blank(lines[i])) continue;
    auto cells = text::split(lines[i], '\t');
    if (cells.size() != 2)
      throw ParseError(path, i + 1, "expected id and score");
    auto score = text::parse_int(text::trim(cells[1]));
    if (!score) throw ParseError(path, i + 1, "score is not an integer");
    out[std::string(text::trim(cells[0]))] = static_cast<int>(*score);
  }
  return out;
}

void write_dataset_with_manifest(const std::string& path, const Dataset& data,
                                 const DatasetManifest& manifest) {
  write_dataset(path, data);
  text::write_file_atomic(manifest_path_for(path), manifest_to_text(manifest));
}

}  // namespace

void PipelineConfig::validate() const {
  if (!(threshold > 0.0 && threshold <= 1.0))
    throw ConfigError("threshold must be in (0, 1], got " + fmt(threshold));
  if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
  if (!(zero_cap > 0.0 && zero_cap < 1.0))
    throw ConfigError("zero_cap must be in (0, 1), got " + fmt(zero_cap));
  if (!(scale > 0.0) || !std::isfinite(scale))
    throw ConfigError("scale must be positive");
  if (order_min_score < 1 || order_min_score > 5)
    throw ConfigError("order_min_score must be within 1..5");
  if (negatives && *negatives < 1) throw ConfigError("negatives must be >= 1");
  if (sample_size && *sample_size < 1) throw ConfigError("sample_size must be >= 1");
  if (effective_sample_size() < 1) throw ConfigError("scale gives an empty sample");
  if (train_size < 1 || test_size < 1)
    throw ConfigError("train_size and test_size must be >= 1");
  if (!(ridge_lambda >= 0.0)) throw ConfigError("ridge_lambda must be >= 0");
  if (!(annotator_noise >= 0.0 && annotator_noise <= 1.0))
    throw ConfigError("annotator_noise must be within [0, 1]");
  if (annotator.empty()) throw ConfigError("annotator must not be empty");
  if (arms.empty()) throw ConfigError("at least one experiment arm is required");
  try {
    morph::parse_plan(morph_plan);
    if (sample_spec != "random") sampling::parse_spec(sample_spec);
    for (const auto& a : arms) eval::parse_arm(a);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
}

double reference_sample_size(std::string_view spec_name) {
  if (spec_name == "normal") return 500000.0;
  if (spec_name == "random") return 1000000.0;
  return 430000.0;
}

std::size_t PipelineConfig::effective_sample_size() const {
  if (sample_size) return *sample_size;
  return static_cast<std::size_t>(
      std::llround(scale * reference_sample_size(sample_spec)));
}

void apply_config_value(PipelineConfig& c, std::string_view key,
                        std::string_view raw) {
  const auto value = text::trim(raw);
  auto real = [&] { return parse_or_throw(text::parse_double(value), key, value); };
  if (key == "seed") {
    c.seed = parse_or_throw(text::parse_uint64(value), key, value);
  } else if (key == "threshold") {
    c.threshold = real();
  } else if (key == "batch_size") {
    c.batch_size = parse_size(key, value);
  } else if (key == "zero_cap") {
    c.zero_cap = real();
  } else if (key == "scale") {
    c.scale = real();
  } else if (key == "morph_plan") {
    c.morph_plan = std::string(value);
  } else if (key == "order_min_score") {
    c.order_min_score =
        static_cast<int>(parse_or_throw(text::parse_int(value), key, value));
  } else if (key == "negatives") {
    c.negatives = parse_size(key, value);
  } else if (key == "sample_spec") {
    c.sample_spec = std::string(value);
  } else if (key == "sample_size") {
    c.sample_size = parse_size(key, value);
  } else if (key == "arms") {
    c.arms.clear();
    for (auto a : text::split(value, ','))
      if (!text::is_blank(a)) c.arms.emplace_back(text::trim(a));
  } else if (key == "train_size") {
    c.train_size = parse_size(key, value);
  } else if (key == "test_size") {
    c.test_size = parse_size(key, value);
  } else if (key == "ridge_lambda") {
    c.ridge_lambda = real();
  } else if (key == "annotator_noise") {
    c.annotator_noise = real();
  } else if (key == "annotator") {
    c.annotator = std::string(value);
  } else {
    throw ConfigError("unknown config key '" + std::string(key) + "'");
  }
}

std::set<std::string> apply_config_text(PipelineConfig& config,
                                        std::string_view content,
                                        const std::string& name) {
  std::set<std::string> keys;
  std::size_t row = 0;
  for (auto line : text::split(content, '\n')) {
    ++row;
    if (auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    if (text::is_blank(line)) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError(name + ":" + std::to_string(row) + ": expected key = value");
    const auto key = text::trim(line.substr(0, eq));
    try {
      apply_config_value(config, key, line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError(name + ":" + std::to_string(row) + ": " + e.what());
    }
    keys.emplace(key);
  }
  return keys;
}

std::string config_to_text(const PipelineConfig& c) {
  std::string out;
  auto kv = [&](std::string_view k, const std::string& v) {
    out += k;
    out += " = ";
    out += v;
    out += '\n';
  };
  kv("seed", std::to_string(c.seed));
  kv("threshold", fmt(c.threshold));
  kv("batch_size", fmt(c.batch_size));
  kv("zero_cap", fmt(c.zero_cap));
  kv("scale", fmt(c.scale));
  kv("morph_plan", c.morph_plan);
  kv("order_min_score", std::to_string(c.order_min_score));
  if (c.negatives) kv("negatives", fmt(*c.negatives));
  kv("sample_spec", c.sample_spec);
  if (c.sample_size) kv("sample_size", fmt(*c.sample_size));
  kv("arms", join(c.arms));
  kv("train_size", fmt(c.train_size));
  kv("test_size", fmt(c.test_size));
  kv("ridge_lambda", fmt(c.ridge_lambda));
  kv("annotator_noise", fmt(c.annotator_noise));
  kv("annotator", c.annotator);
  return out;
}

PipelineInputs inputs_from_fixture_dir(const std::string& dir) {
  auto path = [&](std::string_view name) { return (fs::path(dir) / name).string(); };
  PipelineInputs in;
  in.sentences = path(fixture::kSentencesFile);
  in.engine_base = path(fixture::kEngineBaseFile);
  in.engines = path(fixture::kEnginesFile);
  in.professional = path(fixture::kProfessionalFile);
  in.lexicon = path(fixture::kLexiconFile);
  in.glossary = path(fixture::kGlossaryFile);
  in.gold = path(fixture::kGoldFile);
  return in;
}

constexpr const char* kNoDedupNote =
    "sources are not deduplicated against the usage examples they were "
    "generated from";

std::uint64_t stage_seed(std::uint64_t global_seed, std::string_view stage) {
  return derive_seed(global_seed, {"stage", stage});
}

Dataset augment_order(const Dataset& dataset, std::size_t batch_size,
                      int min_score, std::uint64_t seed,
                      std::size_t* cannot_fill) {
  Dataset out = dataset;
  std::size_t short_batches = 0;
  for (const auto& r : dataset) {
    if (!is_original(r) || r.score_value() < min_score) continue;
    if (morph::word_tokens(r.target).size() < 2) continue;
    Rng rng(derive_seed(seed, {"augment-order", r.id.str()}));
    auto batch = perturb::perturb_batch(r, batch_size, rng);
    if (batch.cannot_fill) ++short_batches;
    for (auto& v : batch.variants) out.push_back(std::move(v));
  }
  if (cannot_fill) *cannot_fill = short_batches;
  return out;
}

Dataset augment_negatives(const Dataset& dataset,
                          std::optional<std::size_t> count, std::uint64_t seed) {
  Dataset originals;
  std::size_t nonzero = 0;
  for (const auto& r : dataset) {
    if (is_original(r)) originals.push_back(r);
    if (r.score && r.score->value() > 0) ++nonzero;
  }
  Rng rng(derive_seed(seed, {"augment-negatives"}));
  auto negatives = perturb::generate_mismatches(originals, count.value_or(nonzero), rng);
  Dataset out = dataset;
  for (auto& n : negatives) out.push_back(std::move(n));
  return out;
}

PipelineResult run_pipeline(const PipelineConfig& config,
                            const PipelineInputs& inputs,
                            const std::string& out_dir, bool overwrite) {
  try {
    config.validate();
  } catch (const Error& e) {
    throw StageFailure("config", e.what());
  }
  if (inputs.gold.has_value() == inputs.scores.has_value())
    throw StageFailure("config", "exactly one of gold references or a scores file is required");

  const fs::path out(out_dir);
  if (fs::exists(out) && !fs::is_empty(out) && !overwrite)
    throw StageFailure("config", "output directory '" + out_dir + "' is not empty");
  const fs::path parent = out.has_parent_path() ? out.parent_path() : fs::path(".");
  fs::create_directories(parent);
  const fs::path tmp =
      parent / ("." + out.filename().string() + ".tmp-" + std::to_string(::getpid()));
  fs::remove_all(tmp);
  fs::create_directories(tmp);
  auto file = [&](std::string_view name) { return (tmp / name).string(); };

  PipelineResult result;
  std::vector<StageEntry> log;
  const char* current = "";
  auto stage_params = [&](const char* name,
                          std::vector<std::pair<std::string, std::string>> params) {
    log.push_back({name, std::move(params)});
  };

  try {
    // ingest
    current = "ingest";
    const auto sentences = ingest::read_sentences(inputs.sentences);
    fixture::Fixture fx;
    fx.engine_base = ingest::read_parallel_tsv(inputs.engine_base);
    fx.engines = fixture::parse_engines(text::read_file(inputs.engines), inputs.engines);
    std::vector<ingest::TranslatorId> engines;
    for (const auto& e : fx.engines) engines.push_back(e.id);
    const auto translator = fixture::make_translator(fx, stage_seed(config.seed, "ingest"));
    std::vector<ingest::CandidateSet> sets;
    sets.reserve(sentences.size());
    for (std::size_t i = 0; i < sentences.size(); ++i)
      sets.push_back(ingest::translate_all(ingest::row_id("mt", i + 1), sentences[i],
                                           engines, translator));
    ingest::write_candidate_sets(file("candidates.tsv"), sets);
    const Dataset professional =
        ingest::ingest_professional_corpus(ingest::read_parallel_tsv(inputs.professional));
    std::vector<std::string> engine_names;
    for (const auto& e : engines) engine_names.push_back(e.name);
    stage_params("ingest", {{"sentences", fmt(sentences.size())},
                            {"engines", join(engine_names)},
                            {"professional", fmt(professional.size())}});

    // filter
    current = "filter";
    auto filtered = consensus::filter_candidates(sets, config.threshold);
    text::write_file_atomic(file("rejections.tsv"),
                            consensus::encode_rejections(filtered.rejected));
    stage_params("filter", {{"threshold", fmt(config.threshold)},
                            {"kept", fmt(filtered.kept.size())},
                            {"rejected", fmt(filtered.rejected.size())}});

    // annotate
    current = "annotate";
    Dataset ranked;
    {
      annotation::AnnotationStore store(filtered.kept, file("annotations.log"));
      std::size_t submitted = 0;
      if (inputs.gold) {
        fixture::SimulatedAnnotator judge(ingest::read_parallel_tsv(*inputs.gold),
                                          stage_seed(config.seed, "annotate"),
                                          config.annotator_noise);
        for (const auto& seg : filtered.kept) {
          store.submit({seg.id.str(), config.annotator, judge.judge(seg), {}, {}, {}});
          ++submitted;
        }
      } else {
        for (const auto& [id, score] : read_scores(*inputs.scores)) {
          store.submit({id, config.annotator, score, {}, {}, {}});
          ++submitted;
        }
      }
      ranked = store.export_ranked(config.annotator);
      stage_params("annotate",
                   {{"source", inputs.gold ? "simulated" : "scores-file"},
                    {"annotator", config.annotator},
                    {"submitted", fmt(submitted)},
                    {"ranked", fmt(ranked.size())}});
    }
    Dataset pool = ranked;
    pool.insert(pool.end(), professional.begin(), professional.end());

    // augment-morph
    current = "augment-morph";
    const auto lexicon = morph::MorphLexicon::load(inputs.lexicon);
    const auto plan = morph::parse_plan(config.morph_plan);
    const std::size_t before_morph = pool.size();
    pool = morph::augment_corpus(pool, lexicon, plan,
                                 stage_seed(config.seed, "augment-morph"));
    stage_params("augment-morph", {{"plan", morph::to_string(plan)},
                                   {"lexicon_entries", fmt(lexicon.size())},
                                   {"added", fmt(pool.size() - before_morph)}});

    // augment-order
    current = "augment-order";
    const std::size_t before_order = pool.size();
    std::size_t short_batches = 0;
    pool = augment_order(pool, config.batch_size, config.order_min_score,
                         stage_seed(config.seed, "augment-order"), &short_batches);
    stage_params("augment-order", {{"batch_size", fmt(config.batch_size)},
                                   {"min_score", std::to_string(config.order_min_score)},
                                   {"added", fmt(pool.size() - before_order)},
                                   {"short_batches", fmt(short_batches)}});

    // augment-negatives
    current = "augment-negatives";
    const std::size_t before_neg = pool.size();
    pool = augment_negatives(pool, config.negatives,
                             stage_seed(config.seed, "augment-negatives"));
    stage_params("augment-negatives",
                 {{"count", config.negatives ? fmt(*config.negatives) : "nonzero"},
                  {"added", fmt(pool.size() - before_neg)}});

    // zero-cap
    current = "zero-cap";
    const std::size_t before_cap = pool.size();
    pool = sampling::enforce_zero_cap(pool, config.zero_cap,
                                      stage_seed(config.seed, "zero-cap"));
    stage_params("zero-cap", {{"cap", fmt(config.zero_cap)},
                              {"removed", fmt(before_cap - pool.size())}});

    result.pool_manifest = build_manifest(pool);
    result.pool_manifest.seed = config.seed;
    result.pool_manifest.stage_log = log;
    result.pool_manifest.notes.push_back(kNoDedupNote);
    write_dataset_with_manifest(file("pool.tsv"), pool, result.pool_manifest);

    // sample
    current = "sample";
    const std::size_t size = config.effective_sample_size();
    const auto sample_seed = stage_seed(config.seed, "sample");
    const Dataset dataset =
        config.sample_spec == "random"
            ? sampling::random_sample(pool, size, sample_seed)
            : sampling::sample_by_spec(pool, sampling::parse_spec(config.sample_spec),
                                       size, sample_seed);
    stage_params("sample", {{"spec", config.sample_spec},
                            {"size", fmt(size)},
                            {"scale", fmt(config.scale)}});

    // experiment
    current = "experiment";
    const auto glossary = eval::Glossary::load(inputs.glossary);
    std::vector<eval::ExperimentArm> arms;
    for (const auto& a : config.arms) arms.push_back(eval::parse_arm(a));
    eval::ExperimentConfig ec;
    ec.train_size = config.train_size;
    ec.test_size = config.test_size;
    ec.seed = stage_seed(config.seed, "experiment");
    ec.ridge_lambda = config.ridge_lambda;
    result.report = eval::run_distribution_experiment(pool, arms, ec, glossary, lexicon);
    text::write_file_atomic(file("report.txt"), eval::report_to_text(result.report));
    text::write_file_atomic(file("report.json"), eval::report_to_json(result.report));
    stage_params("experiment", {{"arms", join(config.arms)},
                                {"train_size", fmt(config.train_size)},
                                {"test_size", fmt(config.test_size)},
                                {"ridge_lambda", fmt(config.ridge_lambda)}});

    result.dataset_manifest = build_manifest(dataset);
    result.dataset_manifest.seed = config.seed;
    result.dataset_manifest.stage_log = log;
    result.dataset_manifest.notes.push_back("sampled from pool.tsv");
    result.dataset_manifest.notes.push_back(kNoDedupNote);
    write_dataset_with_manifest(file("dataset.tsv"), dataset, result.dataset_manifest);

    current = "finalize";
    if (fs::exists(out)) fs::remove_all(out);
    fs::rename(tmp, out);
  } catch (const std::exception& e) {
    std::error_code ignored;
    fs::remove_all(tmp, ignored);
    throw StageFailure(current, e.what());
  }
  return result;
}

}  // namespace qeforge::pipeline
