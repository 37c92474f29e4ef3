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
#include <initializer_list>
#include <random>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace qeforge {

// 64-bit FNV-1a followed by a splitmix64 finalizer. Stable across platforms
// and standard libraries, unlike std::hash.
std::uint64_t stable_hash(std::string_view bytes,
                          std::uint64_t basis = 0xcbf29ce484222325ULL);

std::uint64_t mix64(std::uint64_t x);

// Derives a child seed from a parent seed and an ordered list of labels
// (stage name, segment id, ...). Every per-stage and per-segment generator
// is seeded through here so output does not depend on scheduling.
std::uint64_t derive_seed(std::uint64_t parent,
                          std::initializer_list<std::string_view> labels);

// Seeded generator with portable draws. std::uniform_int_distribution and
// std::shuffle are implementation-defined, so they are not used anywhere a
// byte-identical dataset depends on the result.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform integer in [0, n). n must be > 0.
  std::size_t index(std::size_t n);

  // Uniform double in [0, 1) with 53 random bits.
  double unit();

  bool bernoulli(double p) { return unit() < p; }

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = index(i);
      using std::swap;
      swap(items[i - 1], items[j]);
    }
  }

  template <typename T>
  void shuffle(std::vector<T>& items) {
    shuffle(std::span<T>(items));
  }

  // k distinct indices from [0, n), uniformly, in draw order.
  std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k);

 private:
  std::mt19937_64 engine_;
};

}  // namespace qeforge
