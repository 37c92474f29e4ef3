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

#include "qeforge/bleu.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "qeforge/errors.hpp"
#include "qeforge/text.hpp"

namespace qeforge::bleu {

namespace {

bool is_split_punct(char c) {
  switch (c) {
    case '.': case ',': case ';': case ':': case '!': case '?': case '"':
    case '\'':
      return true;
    default:
      return false;
  }
}

void split_punct(const std::string& word, std::vector<std::string>& out) {
  std::size_t begin = 0;
  std::size_t end = word.size();
  while (begin < end && is_split_punct(word[begin])) ++begin;
  while (end > begin && is_split_punct(word[end - 1])) --end;
  for (std::size_t i = 0; i < begin; ++i) out.emplace_back(1, word[i]);
  if (end > begin) out.push_back(word.substr(begin, end - begin));
  for (std::size_t i = end; i < word.size(); ++i) out.emplace_back(1, word[i]);
}

using NgramCounts = std::map<std::vector<std::string>, int>;

NgramCounts count_ngrams(const std::vector<std::string>& tokens, int n) {
  NgramCounts counts;
  const auto len = static_cast<int>(tokens.size());
  for (int i = 0; i + n <= len; ++i)
    ++counts[std::vector<std::string>(tokens.begin() + i,
                                      tokens.begin() + i + n)];
  return counts;
}

}  // namespace

void BleuConfig::validate() const {
  if (max_order < 1 || max_order > 9)
    throw InvalidArgument("BLEU max_order must lie in [1, 9]");
  if (!(smoothing_epsilon > 0.0))
    throw InvalidArgument("BLEU smoothing_epsilon must be > 0");
}

std::vector<std::string> tokenize(std::string_view text, const BleuConfig& cfg) {
  auto words = text::split_whitespace(text);
  if (cfg.tokenizer == Tokenizer::kWhitespace) return words;
  std::vector<std::string> out;
  out.reserve(words.size() + 4);
  for (const auto& w : words) split_punct(w, out);
  return out;
}

double sentence_bleu(const std::vector<std::string>& hyp,
                     const std::vector<std::string>& ref,
                     const BleuConfig& cfg) {
  cfg.validate();
  if (hyp.empty() || ref.empty()) throw EmptyText();

  const auto hyp_len = static_cast<int>(hyp.size());
  const auto ref_len = static_cast<int>(ref.size());
  double log_sum = 0.0;
  int orders = 0;
  for (int n = 1; n <= cfg.max_order; ++n) {
    const int total = hyp_len - n + 1;
    if (total <= 0) break;
    const auto hyp_counts = count_ngrams(hyp, n);
    const auto ref_counts = count_ngrams(ref, n);
    int matched = 0;
    for (const auto& [gram, count] : hyp_counts) {
      auto it = ref_counts.find(gram);
      if (it != ref_counts.end()) matched += std::min(count, it->second);
    }
    const double numerator = matched > 0 ? matched : cfg.smoothing_epsilon;
    log_sum += std::log(numerator / total);
    ++orders;
  }
  const double precision = std::exp(log_sum / orders);
  const double brevity =
      hyp_len < ref_len
          ? std::exp(1.0 - static_cast<double>(ref_len) / hyp_len)
          : 1.0;
  // exp(log(1)) is exact, but guard the top of the range against rounding in
  // the product anyway.
  return std::clamp(precision * brevity, 0.0, 1.0);
}

double sentence_bleu(std::string_view hypothesis, std::string_view reference,
                     const BleuConfig& cfg) {
  return sentence_bleu(tokenize(hypothesis, cfg), tokenize(reference, cfg),
                       cfg);
}

double symmetric_agreement(std::string_view a, std::string_view b,
                           const BleuConfig& cfg) {
  const auto ta = tokenize(a, cfg);
  const auto tb = tokenize(b, cfg);
  return 0.5 * (sentence_bleu(ta, tb, cfg) + sentence_bleu(tb, ta, cfg));
}

}  // namespace qeforge::bleu
