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

#include <string>
#include <string_view>
#include <vector>

namespace qeforge::bleu {

enum class Tokenizer {
  kWhitespace,
  // Whitespace split, then leading/trailing . , ; : ! ? " ' peeled off into
  // their own tokens. Script-agnostic: Hebrew maqaf-joined words stay whole.
  kWhitespacePlusPunctSplit,
};

struct BleuConfig {
  int max_order = 4;
  // Replaces a zero n-gram match count before dividing by the number of
  // hypothesis n-grams.
  double smoothing_epsilon = 0.1;
  Tokenizer tokenizer = Tokenizer::kWhitespacePlusPunctSplit;

  // Throws InvalidArgument when max_order is outside [1, 9] or epsilon <= 0.
  void validate() const;
};

std::vector<std::string> tokenize(std::string_view text, const BleuConfig& cfg);

// Smoothed sentence-level BLEU in [0, 1]. Orders the hypothesis is too short
// to contain are skipped. Throws EmptyText if either side has no tokens.
double sentence_bleu(std::string_view hypothesis, std::string_view reference,
                     const BleuConfig& cfg = {});

double sentence_bleu(const std::vector<std::string>& hypothesis,
                     const std::vector<std::string>& reference,
                     const BleuConfig& cfg = {});

// Mean of BLEU in both directions.
double symmetric_agreement(std::string_view a, std::string_view b,
                           const BleuConfig& cfg = {});

}  // namespace qeforge::bleu
