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

#ifndef NLIC_METRICS_H_
#define NLIC_METRICS_H_

#include <cstdint>
#include <span>
#include <vector>

namespace nlic {

// Label 1 = consistent (positive).
struct ConfusionCounts {
  int64_t tp = 0;
  int64_t fp = 0;
  int64_t tn = 0;
  int64_t fn = 0;

  int64_t total() const { return tp + fp + tn + fn; }
};

ConfusionCounts Confusion(std::span<const int> labels,
                          std::span<const int> predictions);

// 0.5 * (TP / (TP + FN) + TN / (TN + FP)). Throws kSingleClassLabels.
double BalancedAccuracy(const ConfusionCounts& counts);
double BalancedAccuracy(std::span<const int> labels,
                        std::span<const int> predictions);

// P(score_pos > score_neg) + 0.5 P(score_pos == score_neg), via average ranks.
double RocAuc(std::span<const int> labels, std::span<const double> scores);

// score >= threshold predicts consistent.
std::vector<int> Predict(std::span<const double> scores, double threshold);

struct ThresholdChoice {
  double threshold = 0.0;
  double balanced_accuracy = 0.0;
};

// Scans -inf, the midpoints between consecutive distinct scores and +inf;
// returns the candidate with the highest balanced accuracy, smallest
// threshold on ties.
ThresholdChoice SelectThreshold(std::span<const int> labels,
                                std::span<const double> scores);

// `table[i][k]` = number of raters assigning item i to category k.
double FleissKappa(const std::vector<std::vector<int>>& table);

struct BootstrapOptions {
  int n_resamples = 10000;
  double alpha = 0.05;
  int n_tests = 1;  // Bonferroni divisor
  uint64_t seed = 0;
};

struct SignificanceResult {
  double diff_point_estimate = 0.0;  // BA(A) - BA(B) on the full sample
  double ci_low = 0.0;
  double ci_high = 0.0;
  double alpha_corrected = 0.0;
  bool significant = false;
  int n_resamples = 0;
  int64_t n_redraws = 0;

  friend bool operator==(const SignificanceResult&,
                         const SignificanceResult&) = default;
};

// Paired bootstrap of the balanced-accuracy difference at fixed thresholds.
// Resample r draws from its own generator seeded by (seed, r), so the
// parallel and serial kernels agree bitwise. Single-class resamples are
// redrawn; more than 10 * n_resamples total draws throws kSingleClassLabels.
SignificanceResult BootstrapCompare(std::span<const int> labels,
                                    std::span<const double> scores_a,
                                    std::span<const double> scores_b,
                                    double threshold_a, double threshold_b,
                                    const BootstrapOptions& options);
SignificanceResult BootstrapCompareSerial(std::span<const int> labels,
                                          std::span<const double> scores_a,
                                          std::span<const double> scores_b,
                                          double threshold_a, double threshold_b,
                                          const BootstrapOptions& options);

// Linear-interpolation quantile of sorted values, q in [0, 1].
double SortedQuantile(std::span<const double> sorted, double q);

}  // namespace nlic

#endif  // NLIC_METRICS_H_
