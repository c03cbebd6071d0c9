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

#ifndef NLIC_MATRIX_H_
#define NLIC_MATRIX_H_

#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "nlic/nli_backend.h"
#include "nlic/segmenter.h"

namespace nlic {

// M x N grid of NLI probabilities; row i is document block D_i, column j is
// summary block S_j. Cells are stored row-major.
struct PairMatrix {
  size_t m = 0;
  size_t n = 0;
  std::vector<NliProbs> cells;
  Granularity doc_granularity = Granularity::kSentence;
  Granularity sum_granularity = Granularity::kSentence;
  BackendId backend;

  const NliProbs& at(size_t row, size_t col) const { return cells[row * n + col]; }
  NliProbs& at(size_t row, size_t col) { return cells[row * n + col]; }

  friend bool operator==(const PairMatrix&, const PairMatrix&) = default;
};

enum class Category { kE, kN, kC };

struct CategorySet {
  bool include_e = true;
  bool include_n = false;
  bool include_c = false;

  static CategorySet EntailmentOnly() { return {}; }
  static CategorySet All() { return {true, true, true}; }

  // Included categories in canonical order E, N, C.
  std::vector<Category> Ordered() const;
  size_t count() const { return Ordered().size(); }
  bool valid() const { return include_e || include_n || include_c; }

  friend bool operator==(const CategorySet&, const CategorySet&) = default;
};

std::string_view CategoryName(Category c);
double CategoryValue(const NliProbs& p, Category c);
// Parses e.g. "E", "E,C", "ENC". Throws kInvalidArgument on an empty set.
CategorySet ParseCategorySet(std::string_view spec);
std::string FormatCategorySet(const CategorySet& cats);

struct ScalarGrid {
  size_t m = 0;
  size_t n = 0;
  std::vector<double> values;  // row-major

  double at(size_t row, size_t col) const { return values[row * n + col]; }
  std::vector<double> Column(size_t col) const;
};

// Exactly m * n backend evaluations, issued as one ScorePairs call so the
// backend can batch them.
PairMatrix BuildPairMatrix(const BlockList& doc, const BlockList& summary,
                           const NliBackend& backend);

// One grid per included category, in order E, N, C.
std::vector<ScalarGrid> SelectCategoryView(const PairMatrix& mat,
                                           const CategorySet& cats);

std::string Sha256Hex(std::string_view data);

// Hex SHA-256 over length-prefixed fields plus the segmenter version.
std::string CacheKey(std::string_view doc_text, std::string_view summary_text,
                     Granularity doc_g, Granularity sum_g,
                     const BackendId& backend);

std::string PairMatrixToJson(const PairMatrix& mat, const std::string& key);
PairMatrix PairMatrixFromJson(std::string_view text, std::string* key = nullptr);

// Fixture entries for every (D_i, S_j) cell, readable by FixtureBackend.
std::string FixtureJson(const PairMatrix& mat, const BlockList& doc,
                        const BlockList& summary);

// One JSON file per key under `dir`, plus an in-process layer. Writes go
// through a temporary file and rename, so readers never see partial files
// and concurrent writers of the same key are safe.
class MatrixCache {
 public:
  explicit MatrixCache(std::filesystem::path dir);

  std::optional<PairMatrix> Get(const std::string& key);
  void Put(const std::string& key, const PairMatrix& mat);
  // Drops the in-process layer; subsequent reads hit disk.
  void ClearMemory();

  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path PathFor(const std::string& key) const;

  std::filesystem::path dir_;
  std::mutex mu_;
  std::unordered_map<std::string, PairMatrix> memory_;
};

struct MatrixRequest {
  Granularity doc_granularity = Granularity::kSentence;
  Granularity sum_granularity = Granularity::kSentence;
};

// Segments both texts, then loads the matrix from `cache` or builds and
// stores it. `cache` may be null.
PairMatrix BuildOrLoad(std::string_view doc_text, std::string_view summary_text,
                       const MatrixRequest& request, const NliBackend& backend,
                       MatrixCache* cache);

}  // namespace nlic

#endif  // NLIC_MATRIX_H_
