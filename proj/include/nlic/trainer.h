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

#ifndef NLIC_TRAINER_H_
#define NLIC_TRAINER_H_

#include <cstdint>
#include <span>
#include <vector>

#include "nlic/aggregator.h"
#include "nlic/datasets.h"
#include "nlic/matrix.h"

namespace nlic {

struct AdamConfig {
  double learning_rate = 1e-2;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct TrainConfig {
  int batch_size = 32;
  int max_epochs = 10;
  int patience = 3;  // epochs without validation improvement
  AdamConfig adam;
  uint64_t seed = 0;
  size_t subsample_size = 10000;
  size_t h = kDefaultBins;
  CategorySet cats = CategorySet::EntailmentOnly();
  bool normalize_histograms = true;
};

// Histogram features of every summary sentence; label 1 = consistent.
struct TrainExample {
  std::vector<std::vector<double>> sentence_features;
  int label = 0;
};

inline constexpr double kProbabilityClamp = 1e-12;

// Binary cross-entropy with the score clamped to [1e-12, 1 - 1e-12].
double Loss(double final_score, int label);
double MeanLoss(const ConvModel& model, std::span<const TrainExample> batch);

struct Gradient {
  std::vector<double> weights;
  double bias = 0.0;
};

// Closed-form gradient of MeanLoss through mean -> logistic -> affine.
Gradient ComputeGradient(const ConvModel& model,
                         std::span<const TrainExample> batch);

struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  int64_t t = 0;

  static AdamState Zeros(size_t n) { return {std::vector<double>(n, 0.0),
                                             std::vector<double>(n, 0.0), 0}; }
};

void AdamStep(std::span<double> params, std::span<const double> grads,
              AdamState& state, const AdamConfig& cfg);

struct EpochLog {
  int epoch = 0;
  double train_loss = 0.0;
  double valid_balanced_accuracy = 0.0;
  double valid_threshold = 0.0;
};

struct TrainResult {
  ConvModel model;  // parameters from the best validation epoch
  std::vector<EpochLog> history;
  int best_epoch = 0;
};

// Uniform subsample of `size` examples with the class ratio preserved.
std::vector<TrainExample> StratifiedSubsample(std::span<const TrainExample> examples,
                                              size_t size, uint64_t seed);

TrainResult Train(std::span<const TrainExample> train_set,
                  std::span<const TrainExample> valid_set, const TrainConfig& cfg);

// Builds (or loads from `cache`) each record's pair matrix and bins it. The
// parallel kernel distributes records over OpenMP threads; both variants
// return identical features.
std::vector<TrainExample> PrecomputeExamples(std::span<const LabeledPair> records,
                                             const NliBackend& backend,
                                             const MatrixRequest& request,
                                             const TrainConfig& cfg,
                                             MatrixCache* cache = nullptr);
std::vector<TrainExample> PrecomputeExamplesSerial(
    std::span<const LabeledPair> records, const NliBackend& backend,
    const MatrixRequest& request, const TrainConfig& cfg,
    MatrixCache* cache = nullptr);

}  // namespace nlic

#endif  // NLIC_TRAINER_H_
