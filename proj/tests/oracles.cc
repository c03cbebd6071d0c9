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

#include "oracles.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace nlic::oracle {

double PairwiseAuc(const std::vector<int>& labels, const std::vector<double>& scores) {
  double credit = 0.0;
  double pairs = 0.0;
  for (size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != 1) continue;
    for (size_t j = 0; j < labels.size(); ++j) {
      if (labels[j] != 0) continue;
      pairs += 1.0;
      if (scores[i] > scores[j]) credit += 1.0;
      else if (scores[i] == scores[j]) credit += 0.5;
    }
  }
  return credit / pairs;
}

double BalancedAccuracy(const std::vector<int>& labels, const std::vector<int>& preds) {
  double tp = 0, fn = 0, tn = 0, fp = 0;
  for (size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == 1) (preds[i] == 1 ? tp : fn) += 1;
    else (preds[i] == 1 ? fp : tn) += 1;
  }
  return 0.5 * (tp / (tp + fn) + tn / (tn + fp));
}

ScanResult ExhaustiveThresholdScan(const std::vector<int>& labels,
                                   const std::vector<double>& scores) {
  std::set<double> distinct(scores.begin(), scores.end());
  std::vector<double> values(distinct.begin(), distinct.end());
  std::vector<double> candidates = {-std::numeric_limits<double>::infinity()};
  for (size_t i = 0; i + 1 < values.size(); ++i) {
    candidates.push_back((values[i] + values[i + 1]) / 2.0);
  }
  candidates.push_back(std::numeric_limits<double>::infinity());
  ScanResult best{0.0, -1.0};
  for (double t : candidates) {
    std::vector<int> preds;
    for (double s : scores) preds.push_back(s >= t ? 1 : 0);
    const double ba = BalancedAccuracy(labels, preds);
    if (ba > best.balanced_accuracy) best = {t, ba};
  }
  return best;
}

double FleissKappa(const std::vector<std::vector<int>>& table) {
  const double big_n = static_cast<double>(table.size());
  const size_t k = table[0].size();
  double n = 0;
  for (int x : table[0]) n += x;
  std::vector<double> p(k, 0.0);
  for (const auto& row : table) {
    for (size_t j = 0; j < k; ++j) p[j] += row[j];
  }
  for (double& pj : p) pj /= big_n * n;
  double p_bar = 0.0;
  for (const auto& row : table) {
    double s = 0.0;
    for (int x : row) s += static_cast<double>(x) * (x - 1);
    p_bar += s / (n * (n - 1));
  }
  p_bar /= big_n;
  double p_e = 0.0;
  for (double pj : p) p_e += pj * pj;
  return (p_bar - p_e) / (1 - p_e);
}

double ConvLoss(const std::vector<double>& weights, double bias,
                const std::vector<Example>& batch) {
  double total = 0.0;
  for (const Example& ex : batch) {
    double mean = 0.0;
    for (const auto& f : ex.features) {
      double z = bias;
      for (size_t k = 0; k < f.size(); ++k) z += weights[k] * f[k];
      mean += 1.0 / (1.0 + std::exp(-z));
    }
    mean /= static_cast<double>(ex.features.size());
    mean = std::min(std::max(mean, 1e-12), 1.0 - 1e-12);
    total += ex.label == 1 ? -std::log(mean) : -std::log(1.0 - mean);
  }
  return total / static_cast<double>(batch.size());
}

std::vector<double> FiniteDifferenceGradient(const std::vector<double>& weights,
                                             double bias,
                                             const std::vector<Example>& batch,
                                             double step) {
  std::vector<double> grad;
  std::vector<double> w = weights;
  for (size_t k = 0; k < w.size(); ++k) {
    const double orig = w[k];
    w[k] = orig + step;
    const double up = ConvLoss(w, bias, batch);
    w[k] = orig - step;
    const double down = ConvLoss(w, bias, batch);
    w[k] = orig;
    grad.push_back((up - down) / (2.0 * step));
  }
  grad.push_back((ConvLoss(w, bias + step, batch) - ConvLoss(w, bias - step, batch)) /
                 (2.0 * step));
  return grad;
}

double ScalarAdam::Step(double w, double g) {
  ++t;
  m = beta1 * m + (1 - beta1) * g;
  v = beta2 * v + (1 - beta2) * g * g;
  const double m_hat = m / (1 - std::pow(beta1, t));
  const double v_hat = v / (1 - std::pow(beta2, t));
  return w - lr * m_hat / (std::sqrt(v_hat) + eps);
}

}  // namespace nlic::oracle
