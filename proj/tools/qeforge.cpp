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

// qeforge command-line front end. Every stage reads and writes files in the
// dataset line format; datasets get a .manifest sidecar carrying the stage
// log.

#include <pthread.h>
#include <signal.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <thread>

#include "CLI11.hpp"
#include "qeforge/annotation.hpp"
#include "qeforge/bleu.hpp"
#include "qeforge/consensus.hpp"
#include "qeforge/errors.hpp"
#include "qeforge/evaluation.hpp"
#include "qeforge/fixture.hpp"
#include "qeforge/ingestion.hpp"
#include "qeforge/morph.hpp"
#include "qeforge/pipeline.hpp"
#include "qeforge/sampler.hpp"
#include "qeforge/text.hpp"

namespace fs = std::filesystem;
using namespace qeforge;

namespace {

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("QEFORGE_SEED")) {
    auto v = text::parse_uint64(env);
    if (!v) throw ConfigError("QEFORGE_SEED is not an unsigned integer");
    return *v;
  }
  throw ConfigError("no seed given: pass --seed or set QEFORGE_SEED");
}

std::vector<StageEntry> inherited_log(const std::string& input) {
  const auto path = manifest_path_for(input);
  if (!fs::exists(path)) return {};
  return manifest_from_text(text::read_file(path)).stage_log;
}

void write_output(const std::string& path, const Dataset& data,
                  std::uint64_t seed, const std::string& input, StageEntry entry) {
  auto manifest = build_manifest(data);
  manifest.seed = seed;
  if (!input.empty()) manifest.stage_log = inherited_log(input);
  manifest.stage_log.push_back(std::move(entry));
  write_dataset(path, data);
  text::write_file_atomic(manifest_path_for(path), manifest_to_text(manifest));
}

std::string num(double v) { return text::format_double(v); }
std::string num(std::size_t v) { return std::to_string(v); }

void print_evaluation(const eval::Evaluation& e) {
  std::cout << "size\t" << e.size << "\n"
            << "pearson\t" << text::format_fixed(e.pearson, 6) << "\n"
            << "mean_prediction\t" << text::format_fixed(e.mean_prediction, 6) << "\n"
            << "prediction_variance\t" << text::format_fixed(e.prediction_variance, 6)
            << "\n";
}

int serve(const std::string& dataset, const std::string& host, int port,
          const std::string& log, const std::optional<std::string>& static_dir,
          const std::optional<std::string>& primary) {
  // Block termination signals before any thread starts; one thread waits for
  // them and stops the server.
  sigset_t set;
  sigemptyset(&set);
  sigaddset(&set, SIGINT);
  sigaddset(&set, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &set, nullptr);

  annotation::AnnotationStore store(read_dataset(dataset), log);
  annotation::AnnotationService service(store, {primary, static_dir});
  const int bound = service.bind(host, port);
  if (bound < 0) {
    std::cerr << "error: cannot bind " << host << ":" << port << "\n";
    return 1;
  }
  std::cout << "listening on http://" << host << ":" << bound << std::endl;

  std::thread waiter([&] {
    int sig = 0;
    sigwait(&set, &sig);
    service.stop();
  });
  waiter.detach();
  service.listen();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qeforge: build, augment, sample, annotate and evaluate "
               "quality-estimation datasets"};
  app.require_subcommand(1);

  std::optional<std::uint64_t> seed;
  std::string input, output, lexicon_path, glossary_path;

  // fixture
  auto* fixture_cmd = app.add_subcommand("fixture", "Write the synthetic fixture corpus");
  fixture::FixtureConfig fixture_cfg;
  fixture_cmd->add_option("--out", output, "Output directory")->required();
  fixture_cmd->add_option("--seed", seed, "Seed");
  fixture_cmd->add_option("--sentences", fixture_cfg.sentences, "Machine-translated sources");
  fixture_cmd->add_option("--professional", fixture_cfg.professional,
                          "Professional pairs");

  // prompt
  auto* prompt_cmd = app.add_subcommand("prompt", "Build sentence-generation prompts");
  ingest::UsageExample example;
  int min_words = 20;
  std::string examples_path;
  prompt_cmd->add_option("--headword", example.headword);
  prompt_cmd->add_option("--pos", example.part_of_speech);
  prompt_cmd->add_option("--example", example.example_sentence);
  prompt_cmd->add_option("--examples", examples_path,
                         "TSV of headword, part of speech, example sentence");
  prompt_cmd->add_option("--min-words", min_words)->capture_default_str();

  // ingest
  auto* ingest_cmd =
      app.add_subcommand("ingest", "Ingest a professional parallel corpus (scored 5)");
  std::string id_prefix = "pro";
  ingest_cmd->add_option("--professional", input, "source<TAB>target TSV")->required();
  ingest_cmd->add_option("--out", output)->required();
  ingest_cmd->add_option("--prefix", id_prefix)->capture_default_str();

  // translate-mock
  auto* translate_cmd =
      app.add_subcommand("translate-mock", "Translate sources with the mock engines");
  std::string engine_base, engines_file, engine_list;
  translate_cmd->add_option("--sentences", input)->required();
  translate_cmd->add_option("--engine-base", engine_base,
                            "source<TAB>output TSV the engines start from");
  auto* ef = translate_cmd->add_option("--engines-file", engines_file,
                                       "name, priority, rate, drop_every TSV");
  translate_cmd->add_option("--engines", engine_list, "name:priority,...")
      ->excludes(ef);
  translate_cmd->add_option("--out", output)->required();
  translate_cmd->add_option("--seed", seed);

  // filter
  auto* filter_cmd = app.add_subcommand("filter", "Consensus-filter candidate sets");
  double threshold = consensus::kDefaultThreshold;
  std::string rejections;
  filter_cmd->add_option("--candidates", input)->required();
  filter_cmd->add_option("--threshold", threshold)->capture_default_str();
  filter_cmd->add_option("--out", output)->required();
  filter_cmd->add_option("--rejections", rejections, "Exclusion report");

  // bleu
  auto* bleu_cmd = app.add_subcommand("bleu", "Sentence BLEU of a hypothesis");
  std::string hyp, ref;
  bleu::BleuConfig bleu_cfg;
  bool whitespace_only = false;
  bleu_cmd->add_option("--hyp", hyp)->required();
  bleu_cmd->add_option("--ref", ref)->required();
  bleu_cmd->add_option("--max-order", bleu_cfg.max_order)->capture_default_str();
  bleu_cmd->add_option("--epsilon", bleu_cfg.smoothing_epsilon)->capture_default_str();
  bleu_cmd->add_flag("--whitespace", whitespace_only, "Split on whitespace only");

  // augment-morph
  auto* morph_cmd = app.add_subcommand("augment-morph", "Inject agreement errors");
  std::string plan_text;
  morph_cmd->add_option("--input", input)->required();
  morph_cmd->add_option("--lexicon", lexicon_path)->required();
  morph_cmd->add_option("--plan", plan_text, "e.g. 1:100,2:* (* = one per segment)")
      ->required();
  morph_cmd->add_option("--out", output)->required();
  morph_cmd->add_option("--seed", seed);

  // augment-order
  auto* order_cmd = app.add_subcommand("augment-order", "Word-order perturbation batches");
  std::size_t batch = 20;
  int min_score = 4;
  order_cmd->add_option("--input", input)->required();
  order_cmd->add_option("--batch", batch)->capture_default_str();
  order_cmd->add_option("--min-score", min_score)->capture_default_str();
  order_cmd->add_option("--out", output)->required();
  order_cmd->add_option("--seed", seed);

  // augment-negatives
  auto* neg_cmd = app.add_subcommand("augment-negatives", "Mismatched-pair negatives");
  std::optional<std::size_t> count;
  neg_cmd->add_option("--input", input)->required();
  neg_cmd->add_option("--count", count, "Default: number of non-zero records");
  neg_cmd->add_option("--out", output)->required();
  neg_cmd->add_option("--seed", seed);

  // sample
  auto* sample_cmd = app.add_subcommand("sample", "Distribution-controlled sampling");
  std::string spec_text = "uniform";
  std::optional<std::size_t> size;
  std::optional<double> zero_cap;
  double scale = 0.01;
  sample_cmd->add_option("--input", input)->required();
  sample_cmd->add_option("--spec", spec_text,
                         "uniform | normal | random | skew3 | six weights")
      ->capture_default_str();
  sample_cmd->add_option("--size", size, "Default: scale times the reference size");
  sample_cmd->add_option("--scale", scale)->capture_default_str();
  sample_cmd->add_option("--zero-cap", zero_cap, "Cap the score-0 share first");
  sample_cmd->add_option("--out", output)->required();
  sample_cmd->add_option("--seed", seed);

  // features
  auto* features_cmd = app.add_subcommand("features", "Print baseline features");
  std::string model_path;
  features_cmd->add_option("--input", input)->required();
  features_cmd->add_option("--model", model_path, "Baseline JSON (for its LM)")->required();
  features_cmd->add_option("--glossary", glossary_path)->required();
  features_cmd->add_option("--lexicon", lexicon_path)->required();

  // train-baseline
  auto* train_cmd = app.add_subcommand("train-baseline", "Fit the baseline regressor");
  double lambda = eval::kDefaultRidgeLambda;
  train_cmd->add_option("--train", input)->required();
  train_cmd->add_option("--glossary", glossary_path)->required();
  train_cmd->add_option("--lexicon", lexicon_path)->required();
  train_cmd->add_option("--lambda", lambda)->capture_default_str();
  train_cmd->add_option("--out", output)->required();

  // evaluate
  auto* eval_cmd = app.add_subcommand("evaluate", "Score a test set with a baseline");
  eval_cmd->add_option("--model", model_path)->required();
  eval_cmd->add_option("--test", input)->required();
  eval_cmd->add_option("--glossary", glossary_path)->required();
  eval_cmd->add_option("--lexicon", lexicon_path)->required();

  // experiment
  auto* exp_cmd = app.add_subcommand("experiment", "Distribution-effect experiment");
  std::string specs = "uniform,normal,random";
  eval::ExperimentConfig exp_cfg;
  exp_cmd->add_option("--pool", input)->required();
  exp_cmd->add_option("--specs", specs)->capture_default_str();
  exp_cmd->add_option("--train-size", exp_cfg.train_size)->capture_default_str();
  exp_cmd->add_option("--test-size", exp_cfg.test_size)->capture_default_str();
  exp_cmd->add_option("--lambda", exp_cfg.ridge_lambda)->capture_default_str();
  exp_cmd->add_option("--glossary", glossary_path)->required();
  exp_cmd->add_option("--lexicon", lexicon_path)->required();
  exp_cmd->add_option("--out", output, "Writes OUT.txt and OUT.json; stdout if absent");
  exp_cmd->add_option("--seed", seed);

  // serve
  auto* serve_cmd = app.add_subcommand("serve", "Run the annotation service");
  std::string host = "127.0.0.1", log_path;
  int port = 8080;
  std::optional<std::string> static_dir, primary;
  serve_cmd->add_option("--dataset", input)->required();
  serve_cmd->add_option("--port", port, "0 picks a free port")->capture_default_str();
  serve_cmd->add_option("--host", host)->capture_default_str();
  serve_cmd->add_option("--log", log_path, "Default: annotations.log beside the dataset");
  serve_cmd->add_option("--static", static_dir, "Directory served at /");
  serve_cmd->add_option("--primary", primary, "Annotator preferred at export");

  // pipeline
  auto* pipe_cmd = app.add_subcommand("pipeline", "Run every stage end to end");
  std::string config_path, input_dir, scores_path;
  bool use_fixture = false, overwrite = false;
  std::optional<double> p_threshold, p_zero_cap, p_scale;
  std::optional<std::size_t> p_batch;
  pipe_cmd->add_option("--config", config_path, "key = value file");
  auto* fx_flag = pipe_cmd->add_flag("--fixture", use_fixture,
                                     "Generate the synthetic fixture as input");
  pipe_cmd->add_option("--input-dir", input_dir, "Directory in the fixture layout")
      ->excludes(fx_flag);
  pipe_cmd->add_option("--scores", scores_path, "id<TAB>score instead of gold.tsv");
  pipe_cmd->add_option("--out", output)->required();
  pipe_cmd->add_option("--seed", seed);
  pipe_cmd->add_option("--threshold", p_threshold);
  pipe_cmd->add_option("--batch", p_batch);
  pipe_cmd->add_option("--zero-cap", p_zero_cap);
  pipe_cmd->add_option("--scale", p_scale);
  pipe_cmd->add_flag("--overwrite", overwrite, "Replace a non-empty output directory");

  // manifest
  auto* manifest_cmd = app.add_subcommand("manifest", "Print or rebuild a manifest");
  bool rebuild = false;
  manifest_cmd->add_option("--dataset", input)->required();
  manifest_cmd->add_flag("--rebuild", rebuild,
                         "Recount from the dataset instead of reading the sidecar");

  CLI11_PARSE(app, argc, argv);

  const char* stage = app.get_subcommands().front()->get_name().c_str();
  try {
    if (*fixture_cmd) {
      fixture_cfg.seed = resolve_seed(seed);
      fixture::write_fixture(fixture::make_fixture(fixture_cfg), output);
    } else if (*prompt_cmd) {
      if (!examples_path.empty()) {
        for (const auto& ex : ingest::read_usage_examples(examples_path))
          std::cout << ingest::build_generation_prompt(ex, min_words) << "\n";
      } else {
        if (example.headword.empty() || example.part_of_speech.empty() ||
            example.example_sentence.empty())
          throw ConfigError("--headword, --pos and --example are required without --examples");
        std::cout << ingest::build_generation_prompt(example, min_words) << "\n";
      }
    } else if (*ingest_cmd) {
      auto data = ingest::ingest_professional_corpus(ingest::read_parallel_tsv(input),
                                                     id_prefix);
      write_output(output, data, 0, "",
                   {"ingest", {{"professional", input}, {"records", num(data.size())}}});
    } else if (*translate_cmd) {
      fixture::Fixture fx;
      if (!engine_base.empty()) fx.engine_base = ingest::read_parallel_tsv(engine_base);
      if (!engines_file.empty()) {
        fx.engines = fixture::parse_engines(text::read_file(engines_file), engines_file);
      } else if (!engine_list.empty()) {
        for (auto& id : ingest::parse_engine_list(engine_list))
          fx.engines.push_back({id, {}});
      } else {
        throw ConfigError("--engines or --engines-file is required");
      }
      const auto translator = fixture::make_translator(fx, resolve_seed(seed));
      std::vector<ingest::TranslatorId> engines;
      for (const auto& e : fx.engines) engines.push_back(e.id);
      const auto sentences = ingest::read_sentences(input);
      std::vector<ingest::CandidateSet> sets;
      for (std::size_t i = 0; i < sentences.size(); ++i)
        sets.push_back(ingest::translate_all(ingest::row_id("mt", i + 1), sentences[i],
                                             engines, translator));
      ingest::write_candidate_sets(output, sets);
    } else if (*filter_cmd) {
      auto result = consensus::filter_candidates(ingest::read_candidate_sets(input),
                                                 threshold);
      write_output(output, result.kept, 0, "",
                   {"filter", {{"threshold", num(threshold)},
                               {"kept", num(result.kept.size())},
                               {"rejected", num(result.rejected.size())}}});
      if (!rejections.empty())
        text::write_file_atomic(rejections, consensus::encode_rejections(result.rejected));
      std::cerr << "kept " << result.kept.size() << ", rejected "
                << result.rejected.size() << "\n";
    } else if (*bleu_cmd) {
      if (whitespace_only) bleu_cfg.tokenizer = bleu::Tokenizer::kWhitespace;
      std::cout << text::format_double(bleu::sentence_bleu(hyp, ref, bleu_cfg)) << "\n";
    } else if (*morph_cmd) {
      const auto s = resolve_seed(seed);
      const auto plan = morph::parse_plan(plan_text);
      auto data = morph::augment_corpus(read_dataset(input),
                                        morph::MorphLexicon::load(lexicon_path), plan, s);
      write_output(output, data, s, input,
                   {"augment-morph", {{"plan", morph::to_string(plan)},
                                      {"lexicon", lexicon_path}}});
    } else if (*order_cmd) {
      const auto s = resolve_seed(seed);
      std::size_t short_batches = 0;
      auto data = pipeline::augment_order(read_dataset(input), batch, min_score, s,
                                          &short_batches);
      write_output(output, data, s, input,
                   {"augment-order", {{"batch_size", num(batch)},
                                      {"min_score", std::to_string(min_score)},
                                      {"short_batches", num(short_batches)}}});
    } else if (*neg_cmd) {
      const auto s = resolve_seed(seed);
      auto data = pipeline::augment_negatives(read_dataset(input), count, s);
      write_output(output, data, s, input,
                   {"augment-negatives", {{"count", count ? num(*count) : "nonzero"}}});
    } else if (*sample_cmd) {
      const auto s = resolve_seed(seed);
      Dataset pool = read_dataset(input);
      StageEntry entry{"sample", {{"spec", spec_text}}};
      if (zero_cap) {
        pool = sampling::enforce_zero_cap(pool, *zero_cap,
                                          pipeline::stage_seed(s, "zero-cap"));
        entry.params.emplace_back("zero_cap", num(*zero_cap));
      }
      const std::size_t n = size.value_or(static_cast<std::size_t>(
          std::llround(scale * pipeline::reference_sample_size(spec_text))));
      entry.params.emplace_back("size", num(n));
      auto data = spec_text == "random"
                      ? sampling::random_sample(pool, n, s)
                      : sampling::sample_by_spec(pool, sampling::parse_spec(spec_text), n, s);
      write_output(output, data, s, input, std::move(entry));
    } else if (*features_cmd) {
      const auto baseline = eval::Baseline::from_json(text::read_file(model_path));
      const auto glossary = eval::Glossary::load(glossary_path);
      const auto lexicon = morph::MorphLexicon::load(lexicon_path);
      eval::FeatureResources res{&glossary, &lexicon, &baseline.lm};
      std::cout << "id\tscore";
      for (auto name : eval::FeatureVector::kNames) std::cout << "\t" << name;
      std::cout << "\n";
      for (const auto& r : read_dataset(input)) {
        std::cout << text::escape_field(r.id.str()) << "\t"
                  << (r.score ? std::to_string(r.score->value()) : "");
        for (double v : eval::extract_features(r, res).as_row())
          std::cout << "\t" << text::format_fixed(v, 6);
        std::cout << "\n";
      }
    } else if (*train_cmd) {
      const auto baseline =
          eval::train_baseline(read_dataset(input), eval::Glossary::load(glossary_path),
                               morph::MorphLexicon::load(lexicon_path), lambda);
      text::write_file_atomic(output, baseline.to_json());
    } else if (*eval_cmd) {
      const auto baseline = eval::Baseline::from_json(text::read_file(model_path));
      print_evaluation(eval::evaluate(baseline, read_dataset(input),
                                      eval::Glossary::load(glossary_path),
                                      morph::MorphLexicon::load(lexicon_path)));
    } else if (*exp_cmd) {
      exp_cfg.seed = resolve_seed(seed);
      std::vector<eval::ExperimentArm> arms;
      for (auto a : text::split(specs, ','))
        if (!text::is_blank(a)) arms.push_back(eval::parse_arm(text::trim(a)));
      const auto report = eval::run_distribution_experiment(
          read_dataset(input), arms, exp_cfg, eval::Glossary::load(glossary_path),
          morph::MorphLexicon::load(lexicon_path));
      if (output.empty()) {
        std::cout << eval::report_to_text(report);
      } else {
        text::write_file_atomic(output + ".txt", eval::report_to_text(report));
        text::write_file_atomic(output + ".json", eval::report_to_json(report));
      }
    } else if (*serve_cmd) {
      if (log_path.empty())
        log_path = (fs::path(input).parent_path() / "annotations.log").string();
      return serve(input, host, port, log_path, static_dir, primary);
    } else if (*pipe_cmd) {
      pipeline::PipelineConfig cfg;
      std::set<std::string> config_keys;
      if (!config_path.empty())
        config_keys = pipeline::apply_config_text(cfg, text::read_file(config_path),
                                                  config_path);
      if (seed || !config_keys.count("seed")) cfg.seed = resolve_seed(seed);
      if (p_threshold) cfg.threshold = *p_threshold;
      if (p_batch) cfg.batch_size = *p_batch;
      if (p_zero_cap) cfg.zero_cap = *p_zero_cap;
      if (p_scale) cfg.scale = *p_scale;

      std::optional<std::string> generated;
      if (use_fixture) {
        generated = (fs::temp_directory_path() /
                     ("qeforge-fixture-" + std::to_string(::getpid())))
                        .string();
        fixture::FixtureConfig fc;
        fc.seed = cfg.seed;
        fixture::write_fixture(fixture::make_fixture(fc), *generated);
        input_dir = *generated;
      }
      if (input_dir.empty()) throw ConfigError("--fixture or --input-dir is required");
      auto inputs = pipeline::inputs_from_fixture_dir(input_dir);
      if (!scores_path.empty()) {
        inputs.gold.reset();
        inputs.scores = scores_path;
      }
      try {
        pipeline::run_pipeline(cfg, inputs, output, overwrite);
      } catch (...) {
        if (generated) fs::remove_all(*generated);
        throw;
      }
      if (generated) fs::remove_all(*generated);
    } else if (*manifest_cmd) {
      const auto sidecar = manifest_path_for(input);
      if (rebuild || !fs::exists(sidecar)) {
        std::cout << manifest_to_text(build_manifest(read_dataset(input)));
      } else {
        std::cout << manifest_to_text(manifest_from_text(text::read_file(sidecar)));
      }
    }
  } catch (const pipeline::StageFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: stage '" << stage << "' failed: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
