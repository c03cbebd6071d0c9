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

#include "nlic/aggregator.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "json.hpp"
#include "nlic/error.h"

namespace nlic {
namespace {

using nlohmann::json;

void CheckNonEmpty(const PairMatrix& mat) {
  if (mat.m == 0 || mat.n == 0 || mat.cells.size() != mat.m * mat.n) {
    throw Error(ErrorKind::kDimensionZero, "pair matrix is empty");
  }
}

}  // namespace

std::string_view ReduceOpName(ReduceOp op) {
  switch (op) {
    case ReduceOp::kMin: return "min";
    case ReduceOp::kMean: return "mean";
    case ReduceOp::kMax: return "max";
  }
  return "?";
}

ReduceOp ParseReduceOp(std::string_view name) {
  if (name == "min") return ReduceOp::kMin;
  if (name == "mean") return ReduceOp::kMean;
  if (name == "max") return ReduceOp::kMax;
  throw Error(ErrorKind::kInvalidArgument,
              "unknown operator '" + std::string(name) + "'");
}

double Reduce(ReduceOp op, std::span<const double> values) {
  if (values.empty()) {
    throw Error(ErrorKind::kDimensionZero, "cannot reduce an empty vector");
  }
  switch (op) {
    case ReduceOp::kMin: return *std::min_element(values.begin(), values.end());
    case ReduceOp::kMax: return *std::max_element(values.begin(), values.end());
    case ReduceOp::kMean:
      return std::accumulate(values.begin(), values.end(), 0.0) /
             static_cast<double>(values.size());
  }
  return 0.0;
}

ScoreBreakdown ScoreZs(const PairMatrix& mat, const ZsConfig& cfg) {
  CheckNonEmpty(mat);
  if (!cfg.cats.valid()) {
    throw Error(ErrorKind::kInvalidArgument, "category set is empty");
  }
  const std::vector<ScalarGrid> grids = SelectCategoryView(mat, cfg.cats);
  const std::vector<Category> order = cfg.cats.Ordered();
  ScoreBreakdown out;
  for (size_t g = 0; g < grids.size(); ++g) {
    const ScalarGrid& grid = grids[g];
    std::vector<double> per_sentence(grid.n);
    std::vector<std::optional<size_t>> support(grid.n);
    for (size_t j = 0; j < grid.n; ++j) {
      const std::vector<double> column = grid.Column(j);
      per_sentence[j] = Reduce(cfg.op1, column);
      if (cfg.op1 == ReduceOp::kMax) {
        // max_element returns the first maximum.
        support[j] = static_cast<size_t>(
            std::max_element(column.begin(), column.end()) - column.begin());
      }
    }
    const double final_score = Reduce(cfg.op2, per_sentence);
    if (g == 0) {
      out.final_score = final_score;
      out.per_sentence = std::move(per_sentence);
      out.support = std::move(support);
    } else {
      out.diagnostics[std::string(CategoryName(order[g]))] = final_score;
    }
  }
  return out;
}

Histogram BinColumn(std::span<const double> scores, size_t h) {
  if (h < 2) throw Error(ErrorKind::kInvalidArgument, "bin count must be >= 2");
  Histogram hist{h, std::vector<double>(h, 0.0)};
  for (double s : scores) {
    if (!(s >= 0.0 && s <= 1.0)) {
      throw Error(ErrorKind::kOutOfRangeScore,
                  "score " + std::to_string(s) + " outside [0, 1]");
    }
    const auto bin = std::min(static_cast<size_t>(s * static_cast<double>(h)), h - 1);
    hist.counts[bin] += 1.0;
  }
  return hist;
}

ConvModel ConvModel::Zeros(size_t h, CategorySet cats, bool normalize) {
  ConvModel model;
  model.h = h;
  model.cats = cats;
  model.normalize_histograms = normalize;
  model.weights.assign(h * cats.count(), 0.0);
  return model;
}

// Kept strictly inside (0, 1) even where double rounding would saturate.
double Logistic(double x) {
  constexpr double kHigh = 1.0 - 0x1p-53;
  constexpr double kLow = std::numeric_limits<double>::denorm_min();
  if (x >= 0.0) return std::min(1.0 / (1.0 + std::exp(-x)), kHigh);
  const double z = std::exp(x);
  return std::max(z / (1.0 + z), kLow);
}

std::vector<std::vector<double>> ColumnFeatures(const PairMatrix& mat,
                                                size_t h,
                                                const CategorySet& cats,
                                                bool normalize) {
  CheckNonEmpty(mat);
  const std::vector<ScalarGrid> grids = SelectCategoryView(mat, cats);
  std::vector<std::vector<double>> features(mat.n);
  const double scale = normalize ? 1.0 / static_cast<double>(mat.m) : 1.0;
  for (size_t j = 0; j < mat.n; ++j) {
    features[j].reserve(h * grids.size());
    for (const ScalarGrid& grid : grids) {
      const std::vector<double> column = grid.Column(j);
      const Histogram hist = BinColumn(column, h);
      for (double count : hist.counts) features[j].push_back(count * scale);
    }
  }
  return features;
}

double ConvSentenceScore(const ConvModel& model, std::span<const double> features) {
  if (features.size() != model.weights.size()) {
    throw Error(ErrorKind::kModelShapeMismatch,
                "feature length " + std::to_string(features.size()) +
                    " != weight length " + std::to_string(model.weights.size()));
  }
  double z = model.bias;
  for (size_t k = 0; k < features.size(); ++k) z += model.weights[k] * features[k];
  return Logistic(z);
}

ScoreBreakdown ConvScoreFeatures(const ConvModel& model,
                                 const std::vector<std::vector<double>>& features) {
  if (features.empty()) {
    throw Error(ErrorKind::kDimensionZero, "no summary sentences");
  }
  ScoreBreakdown out;
  out.per_sentence.reserve(features.size());
  for (const auto& f : features) out.per_sentence.push_back(ConvSentenceScore(model, f));
  out.support.assign(features.size(), std::nullopt);
  out.final_score = Reduce(ReduceOp::kMean, out.per_sentence);
  return out;
}

ScoreBreakdown ConvScore(const PairMatrix& mat, const ConvModel& model) {
  if (model.h < 2) throw Error(ErrorKind::kInvalidArgument, "model h must be >= 2");
  if (model.weights.size() != model.feature_size()) {
    throw Error(ErrorKind::kModelShapeMismatch,
                "model has " + std::to_string(model.weights.size()) +
                    " weights, expected h * |cats| = " +
                    std::to_string(model.feature_size()));
  }
  return ConvScoreFeatures(
      model, ColumnFeatures(mat, model.h, model.cats, model.normalize_histograms));
}

std::string ConvModelToJson(const ConvModel& model) {
  json cats = json::array();
  for (Category c : model.cats.Ordered()) cats.push_back(CategoryName(c));
  json doc = {
      {"format_version", 1},
      {"h", model.h},
      {"cats", std::move(cats)},
      {"normalize_histograms", model.normalize_histograms},
      {"weights", model.weights},
      {"bias", model.bias},
  };
  return doc.dump(2);
}

ConvModel ConvModelFromJson(std::string_view text) {
  try {
    const json doc = json::parse(text);
    if (doc.at("format_version").get<int>() != 1) {
      throw Error(ErrorKind::kSchemaMismatch, "unsupported model format_version");
    }
    ConvModel model;
    model.h = doc.at("h").get<size_t>();
    std::string cats;
    for (const json& c : doc.at("cats")) cats += c.get<std::string>();
    model.cats = ParseCategorySet(cats);
    model.normalize_histograms = doc.at("normalize_histograms").get<bool>();
    model.weights = doc.at("weights").get<std::vector<double>>();
    model.bias = doc.at("bias").get<double>();
    if (model.weights.size() != model.feature_size()) {
      throw Error(ErrorKind::kModelShapeMismatch,
                  "model file weight length does not match h * |cats|");
    }
    return model;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kSchemaMismatch,
                std::string("malformed model JSON: ") + e.what());
  }
}

void SaveConvModel(const ConvModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorKind::kIo, "cannot write model " + path);
  out << ConvModelToJson(model) << "\n";
}

ConvModel LoadConvModel(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open model " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ConvModelFromJson(buffer.str());
}

}  // namespace nlic
