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

#ifndef NLIC_AGGREGATOR_H_
#define NLIC_AGGREGATOR_H_

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nlic/matrix.h"

namespace nlic {

enum class ReduceOp { kMin, kMean, kMax };

std::string_view ReduceOpName(ReduceOp op);
ReduceOp ParseReduceOp(std::string_view name);
double Reduce(ReduceOp op, std::span<const double> values);

// op1 reduces each summary column over document rows; op2 reduces the
// resulting per-sentence vector.
struct ZsConfig {
  ReduceOp op1 = ReduceOp::kMax;
  ReduceOp op2 = ReduceOp::kMean;
  CategorySet cats = CategorySet::EntailmentOnly();
};

struct ScoreBreakdown {
  double final_score = 0.0;
  std::vector<double> per_sentence;
  // Row index achieving op1 for each column (ZS with op1 = Max only).
  std::vector<std::optional<size_t>> support;
  // Final scores of the non-primary categories (ZS only), keyed "N"/"C"/"E".
  std::map<std::string, double> diagnostics;
};

// The primary category is the first included one in E, N, C order; its
// reduction is the final score and the others land in `diagnostics`.
// Max ties resolve to the lowest row index.
ScoreBreakdown ScoreZs(const PairMatrix& mat, const ZsConfig& cfg = {});

struct Histogram {
  size_t h = 0;
  std::vector<double> counts;
};

// Bin k covers [k/h, (k+1)/h); the last bin also takes 1.0.
Histogram BinColumn(std::span<const double> scores, size_t h);

inline constexpr size_t kDefaultBins = 50;

struct ConvModel {
  size_t h = kDefaultBins;
  CategorySet cats = CategorySet::EntailmentOnly();
  std::vector<double> weights;  // h * cats.count(), laid out E, N, C
  double bias = 0.0;
  bool normalize_histograms = true;

  size_t feature_size() const { return h * cats.count(); }
  static ConvModel Zeros(size_t h, CategorySet cats, bool normalize = true);
};

double Logistic(double x);

// Per-column feature vectors: concatenated per-category histograms
// (E, N, C order), divided by M when `normalize`.
std::vector<std::vector<double>> ColumnFeatures(const PairMatrix& mat,
                                                size_t h,
                                                const CategorySet& cats,
                                                bool normalize);

// Sentence score = logistic(w . features + b); final = mean over sentences.
double ConvSentenceScore(const ConvModel& model, std::span<const double> features);
ScoreBreakdown ConvScoreFeatures(const ConvModel& model,
                                 const std::vector<std::vector<double>>& features);
ScoreBreakdown ConvScore(const PairMatrix& mat, const ConvModel& model);

// {"format_version":1,"h","cats":["E",...],"normalize_histograms","weights","bias"}
std::string ConvModelToJson(const ConvModel& model);
ConvModel ConvModelFromJson(std::string_view text);
void SaveConvModel(const ConvModel& model, const std::string& path);
ConvModel LoadConvModel(const std::string& path);

}  // namespace nlic

#endif  // NLIC_AGGREGATOR_H_
