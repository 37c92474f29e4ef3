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
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "qeforge/corpus.hpp"
#include "qeforge/errors.hpp"
#include "qeforge/evaluation.hpp"

namespace qeforge::pipeline {

// Full-size sample for a spec name (normal 500k, uniform 430k, random 1M);
// `scale` multiplies it.
double reference_sample_size(std::string_view spec_name);

struct PipelineConfig {
  std::uint64_t seed = 0;
  double threshold = 0.85;
  std::size_t batch_size = 20;
  double zero_cap = 1.0 / 3.0;
  double scale = 0.01;

  std::string morph_plan = "1:*,2:*";
  int order_min_score = 4;
  // Defaults to the number of non-zero records at that stage.
  std::optional<std::size_t> negatives;
  std::string sample_spec = "uniform";
  // Defaults to scale * reference_sample_size(sample_spec).
  std::optional<std::size_t> sample_size;
  std::vector<std::string> arms = {"uniform", "normal", "random", "skew3"};
  std::size_t train_size = 1800;
  std::size_t test_size = 600;
  double ridge_lambda = eval::kDefaultRidgeLambda;
  double annotator_noise = 0.1;
  std::string annotator = "simulated";

  // Throws ConfigError.
  void validate() const;
  std::size_t effective_sample_size() const;
};

// key = value lines; '#' starts a comment. Unknown keys are errors.
// Returns the keys that were set.
std::set<std::string> apply_config_text(PipelineConfig& config,
                                        std::string_view text,
                                        const std::string& name = "");
void apply_config_value(PipelineConfig& config, std::string_view key,
                        std::string_view value);
std::string config_to_text(const PipelineConfig& config);

struct PipelineInputs {
  std::string sentences;
  std::string engine_base;  // source -> shared engine output
  std::string engines;
  std::string professional;
  std::string lexicon;
  std::string glossary;
  // Exactly one of these feeds the annotation stage.
  std::optional<std::string> gold;    // simulated annotator
  std::optional<std::string> scores;  // id \t score
};

PipelineInputs inputs_from_fixture_dir(const std::string& dir);

class StageFailure : public Error {
 public:
  StageFailure(std::string stage, const std::string& cause)
      : Error("stage '" + stage + "' failed: " + cause), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

inline constexpr const char* kStages[] = {
    "ingest",         "filter",          "annotate", "augment-morph",
    "augment-order",  "augment-negatives", "zero-cap", "sample",
    "experiment"};

struct PipelineResult {
  DatasetManifest pool_manifest;
  DatasetManifest dataset_manifest;
  eval::ExperimentReport report;
};

// Runs every stage and writes candidates.tsv, rejections.tsv,
// annotations.log, pool.tsv, dataset.tsv (each dataset with a manifest),
// report.txt and report.json into out_dir. Work happens in a sibling
// temporary directory that replaces out_dir only on success. out_dir must
// not exist or be empty unless overwrite is set. Throws StageFailure.
PipelineResult run_pipeline(const PipelineConfig& config,
                            const PipelineInputs& inputs,
                            const std::string& out_dir, bool overwrite = false);

// Stage seed handed to each stage; the per-stage CLI subcommands accept the
// same value through --seed.
std::uint64_t stage_seed(std::uint64_t global_seed, std::string_view stage);

// Order-perturbation stage: a batch for every record whose origin is
// human_ranked or professional and whose score is at least min_score.
// Returns the input followed by all variants.
Dataset augment_order(const Dataset& dataset, std::size_t batch_size,
                      int min_score, std::uint64_t seed,
                      std::size_t* cannot_fill = nullptr);

// Mismatch stage: negatives drawn from the human_ranked and professional
// records and appended to the input.
Dataset augment_negatives(const Dataset& dataset,
                          std::optional<std::size_t> count, std::uint64_t seed);

}  // namespace qeforge::pipeline
