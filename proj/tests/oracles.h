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

#ifndef NLIC_TESTS_ORACLES_H_
#define NLIC_TESTS_ORACLES_H_

// Test-only reference implementations written directly from the textbook
// definitions. None of them calls into the library code they are used to
// check.

#include <cstdint>
#include <random>
#include <vector>

namespace nlic::oracle {

// O(P * N) pairwise count with half credit for ties.
double PairwiseAuc(const std::vector<int>& labels, const std::vector<double>& scores);

// Balanced accuracy computed from raw loops.
double BalancedAccuracy(const std::vector<int>& labels, const std::vector<int>& preds);

struct ScanResult {
  double threshold;
  double balanced_accuracy;
};

// Evaluates every candidate (-inf, midpoints, +inf) independently.
ScanResult ExhaustiveThresholdScan(const std::vector<int>& labels,
                                   const std::vector<double>& scores);

// Fleiss' kappa with per-category proportions and per-item agreement as in
// the original formulation.
double FleissKappa(const std::vector<std::vector<int>>& table);

// Forward pass of the histogram-convolution loss on precomputed features:
// mean over examples of BCE(mean_j sigmoid(w . f_j + b), y).
struct Example {
  std::vector<std::vector<double>> features;
  int label;
};
double ConvLoss(const std::vector<double>& weights, double bias,
                const std::vector<Example>& batch);

// Central differences of ConvLoss; last entry is d/d(bias).
std::vector<double> FiniteDifferenceGradient(const std::vector<double>& weights,
                                             double bias,
                                             const std::vector<Example>& batch,
                                             double step);

// Scalar Adam, textbook form.
struct ScalarAdam {
  double lr, beta1, beta2, eps;
  double m = 0.0, v = 0.0;
  int t = 0;
  double Step(double w, double g);
};

}  // namespace nlic::oracle

#endif  // NLIC_TESTS_ORACLES_H_
