// Copyright 2026 The nlic Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef NLIC_SYNTHETIC_H_
#define NLIC_SYNTHETIC_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "nlic/datasets.h"

namespace nlic {

// Deterministic generators for tests, examples and the throughput harness.
// Words are pronounceable pseudo-words drawn uniformly from a fixed
// vocabulary; sentences start with a capital and end with a period.
class SyntheticText {
 public:
  explicit SyntheticText(uint64_t seed, size_t vocabulary = 4000);

  std::string Sentence(size_t min_words = 6, size_t max_words = 11);
  std::vector<std::string> Sentences(size_t count);
  size_t Uniform(size_t lo, size_t hi);  // inclusive
  bool Coin();

 private:
  uint64_t Next();

  uint64_t state_;
  std::vector<std::string> vocabulary_;
};

std::string JoinSentences(const std::vector<std::string>& sentences);

// Balanced corpus. Consistent summaries copy 1-3 document sentences;
// inconsistent ones take 1-3 sentences from the previous document.
std::vector<LabeledPair> MakeSeparableCorpus(size_t n, uint64_t seed,
                                             std::string_view id_prefix = "syn");

// `n_docs` documents of `doc_sentences` sentences with 3-sentence summaries
// (alternating consistent / inconsistent).
std::vector<LabeledPair> MakeSyntheticDocuments(size_t n_docs,
                                                size_t doc_sentences,
                                                uint64_t seed);

// Canonical benchmark samples for `datasets`, `per_dataset` each, split
// even/odd, built from MakeSeparableCorpus.
std::vector<BenchmarkSample> MakeSyntheticBenchmark(
    const std::vector<std::string>& datasets, size_t per_dataset, uint64_t seed);

}  // namespace nlic

#endif  // NLIC_SYNTHETIC_H_
