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
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "qeforge/corpus.hpp"
#include "qeforge/morph.hpp"
#include "qeforge/sampler.hpp"

namespace qeforge::eval {

// Configuration of the transformer QE models this toolkit's datasets were
// designed for. Recorded for reference; nothing here trains them.
struct NeuralReferenceSetup {
  static constexpr std::array<int, 3> kHeadLayerWidths = {512, 256, 64};
  static constexpr int kLoraRank = 8;
  static constexpr int kLoraAlpha = 16;
  static constexpr double kLoraDropout = 0.1;
};

// Product-moment correlation. Throws LengthMismatch (also for fewer than two
// points) and ZeroVariance.
double pearson(std::span<const double> xs, std::span<const double> ys);

struct LinearModel {
  // weights[0] is the intercept, then one weight per feature.
  std::vector<double> weights;
  double ridge_lambda = 0.0;

  double predict(std::span<const double> features) const;
};

// Solves (X'X + lambda D) w = X'y with X = [1 | features] and D the identity
// with the intercept entry zeroed. Throws SingularSystem when lambda is 0 and
// the design is rank-deficient; InvalidArgument on shape errors.
LinearModel fit_linear(const std::vector<std::vector<double>>& features,
                       std::span<const double> scores, double ridge_lambda);

// English word -> every target-side form it may surface as.
class Glossary {
 public:
  void add(const std::string& word, const std::string& form);
  // Union of the forms of every source word (lowercased, punctuation
  // stripped).
  std::set<std::string> image(std::string_view source) const;
  std::size_t size() const { return forms_.size(); }

  // TSV: word, then one or more forms (cells may hold several
  // space-separated forms).
  static Glossary parse(std::string_view content, const std::string& name = "");
  static Glossary load(const std::string& path);
  std::string to_text() const;

 private:
  std::map<std::string, std::set<std::string>> forms_;
};

// Add-one smoothed word bigram model over target sentences.
class BigramModel {
 public:
  void train(const std::vector<std::string>& sentences);
  // Mean negative log-probability per bigram, including sentence
  // boundaries. Unknown words map to a shared <unk> symbol.
  double disfluency(std::string_view sentence) const;

  std::string to_json() const;
  static BigramModel from_json(std::string_view json);

 private:
  std::size_t vocab_size() const { return vocab_.size() + 2; }  // + </s>, <unk>
  std::string symbol(const std::string& word) const;

  std::set<std::string> vocab_;
  std::map<std::string, std::size_t> context_counts_;
  std::map<std::pair<std::string, std::string>, std::size_t> bigram_counts_;
};

struct FeatureVector {
  double length_ratio = 0.0;
  double source_overlap = 0.0;
  double lm_disfluency = 0.0;
  int agreement_mismatch_count = 0;
  int punct_mismatch = 0;

  static constexpr std::size_t kSize = 5;
  static constexpr std::array<std::string_view, kSize> kNames = {
      "length_ratio", "source_overlap", "lm_disfluency",
      "agreement_mismatch_count", "punct_mismatch"};

  std::vector<double> as_row() const;
};

struct FeatureResources {
  const Glossary* glossary = nullptr;
  const morph::MorphLexicon* lexicon = nullptr;
  const BigramModel* lm = nullptr;
};

FeatureVector extract_features(const ScoredSegment& seg,
                               const FeatureResources& res);

// Bigram model over the score-5 targets of `train`.
BigramModel train_disfluency_model(const Dataset& train);

struct Baseline {
  BigramModel lm;
  LinearModel model;

  std::string to_json() const;
  static Baseline from_json(std::string_view json);
};

inline constexpr double kDefaultRidgeLambda = 1e-3;

Baseline train_baseline(const Dataset& train, const Glossary& glossary,
                        const morph::MorphLexicon& lexicon,
                        double ridge_lambda = kDefaultRidgeLambda);

// Predictions clamped to [0, 5].
std::vector<double> predict(const Baseline& baseline, const Dataset& data,
                            const Glossary& glossary,
                            const morph::MorphLexicon& lexicon);

struct Evaluation {
  std::size_t size = 0;
  double pearson = 0.0;
  double mean_prediction = 0.0;
  double prediction_variance = 0.0;  // population variance
};

Evaluation evaluate(const Baseline& baseline, const Dataset& test,
                    const Glossary& glossary,
                    const morph::MorphLexicon& lexicon);

// A training regime: a distribution spec, or pool-proportional random
// sampling when `spec` is empty.
struct ExperimentArm {
  std::string name;
  std::optional<sampling::DistributionSpec> spec;
};

// "uniform", "normal", "random", "skew3", or a six-weight list.
ExperimentArm parse_arm(std::string_view name);

struct ExperimentConfig {
  std::size_t train_size = 1800;
  std::size_t test_size = 600;
  std::uint64_t seed = 0;
  double ridge_lambda = kDefaultRidgeLambda;
};

struct ArmResult {
  std::string name;
  std::array<std::size_t, QualityScore::kClasses> train_counts{};
  Evaluation test;
  std::vector<double> weights;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::array<std::size_t, QualityScore::kClasses> test_counts{};
  std::string test_set_note;
  std::vector<ArmResult> arms;
};

// One shared test set (uniform per class) held out of every training
// sample; each arm trains the baseline on its own sample and is scored on
// the shared test set.
ExperimentReport run_distribution_experiment(
    const Dataset& pool, const std::vector<ExperimentArm>& arms,
    const ExperimentConfig& config, const Glossary& glossary,
    const morph::MorphLexicon& lexicon);

std::string report_to_text(const ExperimentReport& report);
std::string report_to_json(const ExperimentReport& report);

}  // namespace qeforge::eval
