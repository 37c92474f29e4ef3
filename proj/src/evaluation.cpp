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

#include "qeforge/evaluation.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "json.hpp"
#include "qeforge/errors.hpp"
#include "qeforge/text.hpp"

namespace qeforge::eval {

namespace {

constexpr std::string_view kBos = "<s>";
constexpr std::string_view kEos = "</s>";
constexpr std::string_view kUnk = "<unk>";

bool is_punct(char c) {
  switch (c) {
    case '.': case ',': case ';': case ':': case '!': case '?': case '"':
    case '\'': case '(': case ')':
      return true;
    default:
      return false;
  }
}

std::string strip_punct(std::string_view word) {
  while (!word.empty() && is_punct(word.front())) word.remove_prefix(1);
  while (!word.empty() && is_punct(word.back())) word.remove_suffix(1);
  return std::string(word);
}

std::string ascii_lower(std::string s) {
  for (auto& c : s)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return s;
}

int count_sentence_punct(std::string_view s) {
  int n = 0;
  for (char c : s)
    if (c == '.' || c == ',' || c == ';' || c == ':' || c == '!' || c == '?')
      ++n;
  return n;
}

}  // namespace

double pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size())
    throw LengthMismatch("pearson: sequences differ in length (" +
                         std::to_string(xs.size()) + " vs " +
                         std::to_string(ys.size()) + ")");
  if (xs.size() < 2) throw LengthMismatch("pearson: need at least two points");
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw ZeroVariance();
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double LinearModel::predict(std::span<const double> features) const {
  if (features.size() + 1 != weights.size())
    throw InvalidArgument("feature row has " + std::to_string(features.size()) +
                          " entries, model expects " +
                          std::to_string(weights.size() - 1));
  double y = weights[0];
  for (std::size_t i = 0; i < features.size(); ++i)
    y += weights[i + 1] * features[i];
  return y;
}

LinearModel fit_linear(const std::vector<std::vector<double>>& features,
                       std::span<const double> scores, double ridge_lambda) {
  if (!(ridge_lambda >= 0.0)) throw InvalidArgument("ridge_lambda must be >= 0");
  if (features.size() != scores.size())
    throw InvalidArgument("feature rows and scores differ in count");
  if (features.empty()) throw InvalidArgument("no training rows");
  const auto dims = features.front().size();
  const auto p = static_cast<Eigen::Index>(dims + 1);
  const auto rows = static_cast<Eigen::Index>(features.size());
  if (rows < p)
    throw InvalidArgument("need at least " + std::to_string(dims + 1) +
                          " rows for " + std::to_string(dims) + " features");

  Eigen::MatrixXd x(rows, p);
  Eigen::VectorXd y(rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& row = features[static_cast<std::size_t>(r)];
    if (row.size() != dims) throw InvalidArgument("ragged feature matrix");
    x(r, 0) = 1.0;
    for (Eigen::Index c = 1; c < p; ++c) x(r, c) = row[static_cast<std::size_t>(c - 1)];
    y(r) = scores[static_cast<std::size_t>(r)];
  }

  Eigen::MatrixXd a = x.transpose() * x;
  const Eigen::VectorXd b = x.transpose() * y;
  for (Eigen::Index i = 1; i < p; ++i) a(i, i) += ridge_lambda;

  Eigen::VectorXd w;
  if (ridge_lambda == 0.0) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> design(x);
    design.setThreshold(1e-10);
    if (design.rank() < p)
      throw SingularSystem("design matrix has rank " +
                           std::to_string(design.rank()) + " < " +
                           std::to_string(p));
    w = a.ldlt().solve(b);
    const double residual = (a * w - b).norm();
    if (!(residual <= 1e-8 * std::max(1.0, b.norm())))
      throw SingularSystem("normal equations too ill-conditioned to solve");
  } else {
    w = a.ldlt().solve(b);
  }

  LinearModel model;
  model.ridge_lambda = ridge_lambda;
  model.weights.assign(w.data(), w.data() + w.size());
  return model;
}

void Glossary::add(const std::string& word, const std::string& form) {
  forms_[ascii_lower(strip_punct(word))].insert(form);
}

std::set<std::string> Glossary::image(std::string_view source) const {
  std::set<std::string> out;
  for (const auto& w : text::split_whitespace(source)) {
    auto it = forms_.find(ascii_lower(strip_punct(w)));
    if (it != forms_.end()) out.insert(it->second.begin(), it->second.end());
  }
  return out;
}

Glossary Glossary::parse(std::string_view content, const std::string& name) {
  Glossary g;
  std::size_t row = 0;
  for (auto line : text::split(content, '\n')) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (text::is_blank(line)) continue;
    auto cells = text::split(line, '\t');
    if (cells.size() < 2)
      throw ParseError(name, row, "glossary rows need a word and >= 1 form");
    const std::string word(text::trim(cells[0]));
    if (word.empty()) throw ParseError(name, row, "empty glossary word");
    for (std::size_t c = 1; c < cells.size(); ++c)
      for (const auto& form : text::split_whitespace(cells[c])) g.add(word, form);
  }
  return g;
}

Glossary Glossary::load(const std::string& path) {
  return parse(text::read_file(path), path);
}

std::string Glossary::to_text() const {
  std::string out;
  for (const auto& [word, forms] : forms_) {
    out += word;
    for (const auto& f : forms) {
      out += '\t';
      out += f;
    }
    out += '\n';
  }
  return out;
}

std::string BigramModel::symbol(const std::string& word) const {
  return vocab_.count(word) ? word : std::string(kUnk);
}

void BigramModel::train(const std::vector<std::string>& sentences) {
  for (const auto& s : sentences)
    for (const auto& w : morph::word_tokens(s)) vocab_.insert(w);
  for (const auto& s : sentences) {
    std::string prev(kBos);
    auto words = morph::word_tokens(s);
    words.emplace_back(kEos);
    for (const auto& w : words) {
      ++context_counts_[prev];
      ++bigram_counts_[{prev, w}];
      prev = w;
    }
  }
}

double BigramModel::disfluency(std::string_view sentence) const {
  auto words = morph::word_tokens(sentence);
  std::string prev(kBos);
  double total = 0.0;
  std::size_t n = 0;
  words.emplace_back(kEos);
  const double v = static_cast<double>(vocab_size());
  for (std::size_t i = 0; i < words.size(); ++i) {
    const std::string w = i + 1 == words.size() ? words[i] : symbol(words[i]);
    std::size_t ctx = 0;
    if (auto it = context_counts_.find(prev); it != context_counts_.end())
      ctx = it->second;
    std::size_t pair = 0;
    if (auto it = bigram_counts_.find({prev, w}); it != bigram_counts_.end())
      pair = it->second;
    total -= std::log((static_cast<double>(pair) + 1.0) /
                      (static_cast<double>(ctx) + v));
    ++n;
    prev = w;
  }
  return total / static_cast<double>(n);
}

std::string BigramModel::to_json() const {
  nlohmann::ordered_json j;
  j["vocab"] = vocab_;
  nlohmann::ordered_json ctx = nlohmann::ordered_json::object();
  for (const auto& [k, v] : context_counts_) ctx[k] = v;
  j["contexts"] = ctx;
  nlohmann::ordered_json bigrams = nlohmann::ordered_json::array();
  for (const auto& [k, v] : bigram_counts_)
    bigrams.push_back({k.first, k.second, v});
  j["bigrams"] = bigrams;
  return j.dump();
}

BigramModel BigramModel::from_json(std::string_view json) {
  BigramModel m;
  try {
    auto j = nlohmann::json::parse(json);
    for (const auto& w : j.at("vocab")) m.vocab_.insert(w.get<std::string>());
    for (const auto& [k, v] : j.at("contexts").items())
      m.context_counts_[k] = v.get<std::size_t>();
    for (const auto& row : j.at("bigrams"))
      m.bigram_counts_[{row.at(0).get<std::string>(),
                        row.at(1).get<std::string>()}] =
          row.at(2).get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw MalformedRecord(std::string("bigram model: ") + e.what());
  }
  return m;
}

std::vector<double> FeatureVector::as_row() const {
  return {length_ratio, source_overlap, lm_disfluency,
          static_cast<double>(agreement_mismatch_count),
          static_cast<double>(punct_mismatch)};
}

FeatureVector extract_features(const ScoredSegment& seg,
                               const FeatureResources& res) {
  if (!res.glossary || !res.lexicon || !res.lm)
    throw InvalidArgument("feature extraction needs glossary, lexicon and LM");
  const auto src_words = text::split_whitespace(seg.source);
  const auto tgt_words = morph::word_tokens(seg.target);

  FeatureVector f;
  f.length_ratio = src_words.empty() ? 0.0
                                     : static_cast<double>(tgt_words.size()) /
                                           static_cast<double>(src_words.size());
  const auto image = res.glossary->image(seg.source);
  std::size_t hits = 0;
  for (const auto& w : tgt_words)
    if (image.count(strip_punct(w))) ++hits;
  f.source_overlap = tgt_words.empty() ? 0.0
                                       : static_cast<double>(hits) /
                                             static_cast<double>(tgt_words.size());
  f.lm_disfluency = res.lm->disfluency(seg.target);
  f.agreement_mismatch_count = morph::agreement_conflicts(tgt_words, *res.lexicon);
  f.punct_mismatch =
      std::abs(count_sentence_punct(seg.source) - count_sentence_punct(seg.target));
  return f;
}

BigramModel train_disfluency_model(const Dataset& train) {
  std::vector<std::string> clean;
  for (const auto& r : train)
    if (r.score && r.score->value() == 5) clean.push_back(r.target);
  BigramModel lm;
  lm.train(clean);
  return lm;
}

std::string Baseline::to_json() const {
  nlohmann::ordered_json j;
  j["feature_names"] = std::vector<std::string>(FeatureVector::kNames.begin(),
                                                FeatureVector::kNames.end());
  j["weights"] = model.weights;
  j["ridge_lambda"] = model.ridge_lambda;
  j["lm"] = nlohmann::ordered_json::parse(lm.to_json());
  return j.dump(2) + "\n";
}

Baseline Baseline::from_json(std::string_view json) {
  Baseline b;
  try {
    auto j = nlohmann::json::parse(json);
    b.model.weights = j.at("weights").get<std::vector<double>>();
    b.model.ridge_lambda = j.at("ridge_lambda").get<double>();
    b.lm = BigramModel::from_json(j.at("lm").dump());
  } catch (const nlohmann::json::exception& e) {
    throw MalformedRecord(std::string("baseline model: ") + e.what());
  }
  if (b.model.weights.size() != FeatureVector::kSize + 1)
    throw MalformedRecord("baseline model has the wrong number of weights");
  return b;
}

Baseline train_baseline(const Dataset& train, const Glossary& glossary,
                        const morph::MorphLexicon& lexicon,
                        double ridge_lambda) {
  Baseline b;
  b.lm = train_disfluency_model(train);
  FeatureResources res{&glossary, &lexicon, &b.lm};
  std::vector<std::vector<double>> rows;
  std::vector<double> scores;
  rows.reserve(train.size());
  for (const auto& r : train) {
    rows.push_back(extract_features(r, res).as_row());
    scores.push_back(r.score_value());
  }
  b.model = fit_linear(rows, scores, ridge_lambda);
  return b;
}

std::vector<double> predict(const Baseline& baseline, const Dataset& data,
                            const Glossary& glossary,
                            const morph::MorphLexicon& lexicon) {
  FeatureResources res{&glossary, &lexicon, &baseline.lm};
  std::vector<double> out;
  out.reserve(data.size());
  for (const auto& r : data)
    out.push_back(std::clamp(
        baseline.model.predict(extract_features(r, res).as_row()), 0.0, 5.0));
  return out;
}

Evaluation evaluate(const Baseline& baseline, const Dataset& test,
                    const Glossary& glossary,
                    const morph::MorphLexicon& lexicon) {
  const auto preds = predict(baseline, test, glossary, lexicon);
  std::vector<double> truth;
  truth.reserve(test.size());
  for (const auto& r : test) truth.push_back(r.score_value());

  Evaluation e;
  e.size = test.size();
  e.pearson = pearson(preds, truth);
  const double n = static_cast<double>(preds.size());
  e.mean_prediction = std::accumulate(preds.begin(), preds.end(), 0.0) / n;
  double ss = 0.0;
  for (double p : preds) ss += (p - e.mean_prediction) * (p - e.mean_prediction);
  e.prediction_variance = ss / n;
  return e;
}

ExperimentArm parse_arm(std::string_view name) {
  if (name == "random") return {"random", std::nullopt};
  return {std::string(name), sampling::parse_spec(name)};
}

ExperimentReport run_distribution_experiment(
    const Dataset& pool, const std::vector<ExperimentArm>& arms,
    const ExperimentConfig& config, const Glossary& glossary,
    const morph::MorphLexicon& lexicon) {
  ExperimentReport report;
  report.config = config;
  report.test_set_note =
      "held-out test set sampled uniformly per score class, disjoint from "
      "every training sample";

  const Dataset test = sampling::sample_by_spec(
      pool, sampling::uniform_spec(), config.test_size,
      derive_seed(config.seed, {"experiment", "test"}));
  report.test_counts = build_manifest(test).counts_per_score;

  std::unordered_set<std::string> held_out;
  for (const auto& r : test) held_out.insert(r.id.str());
  Dataset remaining;
  remaining.reserve(pool.size() - test.size());
  for (const auto& r : pool)
    if (!held_out.count(r.id.str())) remaining.push_back(r);

  for (const auto& arm : arms) {
    const std::uint64_t arm_seed =
        derive_seed(config.seed, {"experiment", "train", arm.name});
    const Dataset train =
        arm.spec ? sampling::sample_by_spec(remaining, *arm.spec,
                                            config.train_size, arm_seed)
                 : sampling::random_sample(remaining, config.train_size, arm_seed);
    const Baseline baseline =
        train_baseline(train, glossary, lexicon, config.ridge_lambda);

    ArmResult result;
    result.name = arm.name;
    result.train_counts = build_manifest(train).counts_per_score;
    result.test = evaluate(baseline, test, glossary, lexicon);
    result.weights = baseline.model.weights;
    report.arms.push_back(std::move(result));
  }
  return report;
}

std::string report_to_text(const ExperimentReport& report) {
  std::string out;
  out += "distribution experiment\n";
  out += "seed " + std::to_string(report.config.seed) + ", train size " +
         std::to_string(report.config.train_size) + ", test size " +
         std::to_string(report.config.test_size) + ", ridge lambda " +
         text::format_double(report.config.ridge_lambda) + "\n";
  out += "test set: " + report.test_set_note + "\n";
  out += "test counts (0..5):";
  for (auto c : report.test_counts) out += " " + std::to_string(c);
  out += "\n\n";
  out += "arm       pearson   mean_pred  pred_var   train counts (0..5)\n";
  for (const auto& arm : report.arms) {
    std::string name = arm.name;
    if (name.size() < 9) name.resize(9, ' ');
    out += name + " " + text::format_fixed(arm.test.pearson, 6) + "  " +
           text::format_fixed(arm.test.mean_prediction, 6) + "   " +
           text::format_fixed(arm.test.prediction_variance, 6) + "  ";
    for (auto c : arm.train_counts) out += " " + std::to_string(c);
    out += "\n";
  }
  return out;
}

std::string report_to_json(const ExperimentReport& report) {
  nlohmann::ordered_json j;
  j["seed"] = report.config.seed;
  j["train_size"] = report.config.train_size;
  j["test_size"] = report.config.test_size;
  j["ridge_lambda"] = report.config.ridge_lambda;
  j["test_set"] = report.test_set_note;
  j["test_counts"] = report.test_counts;
  j["feature_names"] = std::vector<std::string>(FeatureVector::kNames.begin(),
                                                FeatureVector::kNames.end());
  nlohmann::ordered_json arms = nlohmann::ordered_json::array();
  for (const auto& arm : report.arms) {
    nlohmann::ordered_json a;
    a["name"] = arm.name;
    a["train_counts"] = arm.train_counts;
    a["pearson"] = arm.test.pearson;
    a["mean_prediction"] = arm.test.mean_prediction;
    a["prediction_variance"] = arm.test.prediction_variance;
    a["weights"] = arm.weights;
    arms.push_back(a);
  }
  j["arms"] = arms;
  return j.dump(2) + "\n";
}

}  // namespace qeforge::eval
