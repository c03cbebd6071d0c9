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

#include "nlic/synthetic.h"

#include <cctype>

namespace nlic {
namespace {

constexpr std::string_view kOnsets[] = {"b", "d", "f", "g", "k", "l", "m", "n",
                                        "p", "r", "s", "t", "v", "z", "br", "st"};
constexpr std::string_view kVowels[] = {"a", "e", "i", "o", "u", "ai", "ou"};

}  // namespace

SyntheticText::SyntheticText(uint64_t seed, size_t vocabulary)
    : state_(seed * 0x9E3779B97F4A7C15ull + 0x632BE59BD9B4E019ull) {
  // The vocabulary is seed-independent so corpora drawn with different seeds
  // share words.
  vocabulary_.reserve(vocabulary);
  for (size_t i = 0; i < vocabulary; ++i) {
    std::string word;
    size_t x = i;
    const size_t syllables = 2 + i % 2;
    for (size_t s = 0; s < syllables; ++s) {
      word += kOnsets[x % std::size(kOnsets)];
      x /= std::size(kOnsets);
      word += kVowels[x % std::size(kVowels)];
      x /= std::size(kVowels);
    }
    word += std::to_string(i % 97);
    vocabulary_.push_back(std::move(word));
  }
}

uint64_t SyntheticText::Next() {
  // SplitMix64 stream.
  uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

size_t SyntheticText::Uniform(size_t lo, size_t hi) {
  const auto span = static_cast<unsigned __int128>(hi - lo + 1);
  return lo + static_cast<size_t>((static_cast<unsigned __int128>(Next()) * span) >> 64);
}

bool SyntheticText::Coin() { return (Next() >> 63) != 0; }

std::string SyntheticText::Sentence(size_t min_words, size_t max_words) {
  const size_t words = Uniform(min_words, max_words);
  std::string out;
  for (size_t w = 0; w < words; ++w) {
    if (w > 0) out.push_back(' ');
    std::string word = vocabulary_[Uniform(0, vocabulary_.size() - 1)];
    if (w == 0) word[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(word[0])));
    out += word;
  }
  out.push_back('.');
  return out;
}

std::vector<std::string> SyntheticText::Sentences(size_t count) {
  std::vector<std::string> out;
  out.reserve(count);
  for (size_t i = 0; i < count; ++i) out.push_back(Sentence());
  return out;
}

std::string JoinSentences(const std::vector<std::string>& sentences) {
  std::string out;
  for (const std::string& s : sentences) {
    if (!out.empty()) out.push_back(' ');
    out += s;
  }
  return out;
}

std::vector<LabeledPair> MakeSeparableCorpus(size_t n, uint64_t seed,
                                             std::string_view id_prefix) {
  SyntheticText gen(seed);
  std::vector<LabeledPair> out;
  out.reserve(n);
  std::vector<std::string> previous = gen.Sentences(10);
  for (size_t i = 0; i < n; ++i) {
    std::vector<std::string> doc = gen.Sentences(gen.Uniform(5, 14));
    const size_t summary_len = gen.Uniform(1, 3);
    const int label = i % 2 == 0 ? 1 : 0;
    // Consistent summaries copy document sentences; inconsistent ones take
    // every sentence from the previous document.
    const std::vector<std::string>& source = label == 1 ? doc : previous;
    std::vector<std::string> summary;
    for (size_t k = 0; k < summary_len; ++k) {
      summary.push_back(source[gen.Uniform(0, source.size() - 1)]);
    }
    out.push_back({std::string(id_prefix) + "-" + std::to_string(i),
                   JoinSentences(doc), JoinSentences(summary), label});
    previous = std::move(doc);
  }
  return out;
}

std::vector<LabeledPair> MakeSyntheticDocuments(size_t n_docs,
                                                size_t doc_sentences,
                                                uint64_t seed) {
  SyntheticText gen(seed);
  std::vector<LabeledPair> out;
  out.reserve(n_docs);
  for (size_t i = 0; i < n_docs; ++i) {
    std::vector<std::string> doc = gen.Sentences(doc_sentences);
    std::vector<std::string> summary;
    const int label = i % 2 == 0 ? 1 : 0;
    for (size_t k = 0; k < 3; ++k) {
      summary.push_back(label == 1 || k < 2 ? doc[gen.Uniform(0, doc.size() - 1)]
                                            : gen.Sentence());
    }
    out.push_back({"doc-" + std::to_string(i), JoinSentences(doc),
                   JoinSentences(summary), label});
  }
  return out;
}

std::vector<BenchmarkSample> MakeSyntheticBenchmark(
    const std::vector<std::string>& datasets, size_t per_dataset, uint64_t seed) {
  std::vector<BenchmarkSample> out;
  for (size_t d = 0; d < datasets.size(); ++d) {
    const std::vector<LabeledPair> pairs =
        MakeSeparableCorpus(per_dataset, seed + 7919 * (d + 1), datasets[d]);
    for (size_t i = 0; i < pairs.size(); ++i) {
      BenchmarkSample s;
      s.id = pairs[i].id;
      s.document = pairs[i].document;
      s.summary = pairs[i].summary;
      s.label = pairs[i].label;
      s.dataset = datasets[d];
      // Labels alternate, so pairing positions keeps both classes per split.
      s.split = (i / 2) % 2 == 0 ? Split::kValidation : Split::kTest;
      out.push_back(std::move(s));
    }
  }
  return out;
}

}  // namespace nlic
