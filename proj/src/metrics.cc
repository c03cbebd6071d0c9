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

#include "nlic/metrics.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "nlic/error.h"

namespace nlic {
namespace {

void CheckAligned(size_t a, size_t b) {
  if (a != b) {
    throw Error(ErrorKind::kInvalidArgument,
                "array lengths differ: " + std::to_string(a) + " vs " +
                    std::to_string(b));
  }
}

void CheckBothClasses(std::span<const int> labels) {
  bool pos = false;
  bool neg = false;
  for (int y : labels) {
    if (y != 0 && y != 1) {
      throw Error(ErrorKind::kInvalidArgument, "labels must be 0 or 1");
    }
    (y == 1 ? pos : neg) = true;
  }
  if (!pos || !neg) {
    throw Error(ErrorKind::kSingleClassLabels,
                "labels must contain both classes");
  }
}

uint64_t SplitMix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

size_t Bounded(std::mt19937_64& rng, size_t n) {
  return static_cast<size_t>(
      (static_cast<unsigned __int128>(rng()) * static_cast<unsigned __int128>(n)) >> 64);
}

struct BootstrapInputs {
  std::vector<int> labels;
  std::vector<int> pred_a;
  std::vector<int> pred_b;
  int64_t max_attempts = 0;
};

struct ResampleOutcome {
  double diff = 0.0;
  int64_t attempts = 0;
};

// One resample; never throws so it can run inside an OpenMP region.
ResampleOutcome RunResample(const BootstrapInputs& in, uint64_t seed, int r) {
  std::mt19937_64 rng(SplitMix64(seed ^ SplitMix64(static_cast<uint64_t>(r))));
  const size_t n = in.labels.size();
  ResampleOutcome out;
  while (out.attempts < in.max_attempts) {
    ++out.attempts;
    ConfusionCounts a;
    ConfusionCounts b;
    for (size_t k = 0; k < n; ++k) {
      const size_t idx = Bounded(rng, n);
      const int y = in.labels[idx];
      const int pa = in.pred_a[idx];
      const int pb = in.pred_b[idx];
      if (y == 1) {
        (pa == 1 ? a.tp : a.fn)++;
        (pb == 1 ? b.tp : b.fn)++;
      } else {
        (pa == 1 ? a.fp : a.tn)++;
        (pb == 1 ? b.fp : b.tn)++;
      }
    }
    if (a.tp + a.fn == 0 || a.tn + a.fp == 0) continue;
    out.diff = BalancedAccuracy(a) - BalancedAccuracy(b);
    return out;
  }
  out.diff = std::numeric_limits<double>::quiet_NaN();
  return out;
}

BootstrapInputs PrepareBootstrap(std::span<const int> labels,
                                 std::span<const double> scores_a,
                                 std::span<const double> scores_b,
                                 double threshold_a, double threshold_b,
                                 const BootstrapOptions& options) {
  CheckAligned(labels.size(), scores_a.size());
  CheckAligned(labels.size(), scores_b.size());
  CheckBothClasses(labels);
  if (options.n_resamples < 1000) {
    throw Error(ErrorKind::kInvalidArgument, "n_resamples must be >= 1000");
  }
  if (options.n_tests < 1 || !(options.alpha > 0.0 && options.alpha < 1.0)) {
    throw Error(ErrorKind::kInvalidArgument,
                "alpha must be in (0, 1) and n_tests >= 1");
  }
  BootstrapInputs in;
  in.labels.assign(labels.begin(), labels.end());
  in.pred_a = Predict(scores_a, threshold_a);
  in.pred_b = Predict(scores_b, threshold_b);
  in.max_attempts = 10 * static_cast<int64_t>(options.n_resamples);
  return in;
}

SignificanceResult Summarize(const BootstrapInputs& in,
                             std::vector<double> diffs,
                             const std::vector<int64_t>& attempts,
                             const BootstrapOptions& options) {
  const int64_t total_attempts =
      std::accumulate(attempts.begin(), attempts.end(), int64_t{0});
  if (total_attempts > in.max_attempts ||
      std::any_of(diffs.begin(), diffs.end(), [](double d) { return std::isnan(d); })) {
    throw Error(ErrorKind::kSingleClassLabels,
                "too many single-class bootstrap resamples (" +
                    std::to_string(total_attempts) + " draws)");
  }
  SignificanceResult res;
  res.n_resamples = options.n_resamples;
  res.n_redraws = total_attempts - options.n_resamples;
  res.diff_point_estimate =
      BalancedAccuracy(in.labels, in.pred_a) - BalancedAccuracy(in.labels, in.pred_b);
  res.alpha_corrected = options.alpha / options.n_tests;
  std::sort(diffs.begin(), diffs.end());
  res.ci_low = SortedQuantile(diffs, res.alpha_corrected / 2.0);
  res.ci_high = SortedQuantile(diffs, 1.0 - res.alpha_corrected / 2.0);
  res.significant = res.ci_low > 0.0 || res.ci_high < 0.0;
  return res;
}

}  // namespace

ConfusionCounts Confusion(std::span<const int> labels,
                          std::span<const int> predictions) {
  CheckAligned(labels.size(), predictions.size());
  ConfusionCounts c;
  for (size_t i = 0; i < labels.size(); ++i) {
    const bool y = labels[i] == 1;
    const bool p = predictions[i] == 1;
    if (y && p) ++c.tp;
    else if (y) ++c.fn;
    else if (p) ++c.fp;
    else ++c.tn;
  }
  return c;
}

double BalancedAccuracy(const ConfusionCounts& c) {
  if (c.tp + c.fn == 0 || c.tn + c.fp == 0) {
    throw Error(ErrorKind::kSingleClassLabels,
                "balanced accuracy needs both classes");
  }
  const double tpr = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
  const double tnr = static_cast<double>(c.tn) / static_cast<double>(c.tn + c.fp);
  return 0.5 * (tpr + tnr);
}

double BalancedAccuracy(std::span<const int> labels,
                        std::span<const int> predictions) {
  CheckBothClasses(labels);
  return BalancedAccuracy(Confusion(labels, predictions));
}

double RocAuc(std::span<const int> labels, std::span<const double> scores) {
  CheckAligned(labels.size(), scores.size());
  CheckBothClasses(labels);
  const size_t n = labels.size();
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return scores[a] < scores[b]; });
  double positive_rank_sum = 0.0;
  int64_t positives = 0;
  for (size_t i = 0; i < n;) {
    size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    // Ranks i+1..j share their average.
    const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);
    for (size_t k = i; k < j; ++k) {
      if (labels[order[k]] == 1) {
        positive_rank_sum += avg_rank;
        ++positives;
      }
    }
    i = j;
  }
  const auto p = static_cast<double>(positives);
  const auto q = static_cast<double>(static_cast<int64_t>(n) - positives);
  return (positive_rank_sum - p * (p + 1.0) / 2.0) / (p * q);
}

std::vector<int> Predict(std::span<const double> scores, double threshold) {
  std::vector<int> out(scores.size());
  for (size_t i = 0; i < scores.size(); ++i) out[i] = scores[i] >= threshold ? 1 : 0;
  return out;
}

ThresholdChoice SelectThreshold(std::span<const int> labels,
                                std::span<const double> scores) {
  CheckAligned(labels.size(), scores.size());
  CheckBothClasses(labels);
  std::vector<std::pair<double, int>> sorted;
  sorted.reserve(scores.size());
  for (size_t i = 0; i < scores.size(); ++i) sorted.emplace_back(scores[i], labels[i]);
  std::sort(sorted.begin(), sorted.end());

  int64_t pos_total = 0;
  for (const auto& [s, y] : sorted) pos_total += y;
  const int64_t neg_total = static_cast<int64_t>(sorted.size()) - pos_total;

  // At t = -inf everything is predicted positive.
  ConfusionCounts c{pos_total, neg_total, 0, 0};
  ThresholdChoice best{-std::numeric_limits<double>::infinity(), BalancedAccuracy(c)};
  size_t i = 0;
  while (i < sorted.size()) {
    const double value = sorted[i].first;
    while (i < sorted.size() && sorted[i].first == value) {
      if (sorted[i].second == 1) {
        --c.tp;
        ++c.fn;
      } else {
        --c.fp;
        ++c.tn;
      }
      ++i;
    }
    double candidate;
    if (i < sorted.size()) {
      const double next = sorted[i].first;
      candidate = value + (next - value) / 2.0;
      if (!(candidate > value)) candidate = next;
    } else {
      candidate = std::numeric_limits<double>::infinity();
    }
    const double ba = BalancedAccuracy(c);
    if (ba > best.balanced_accuracy) best = {candidate, ba};
  }
  return best;
}

double FleissKappa(const std::vector<std::vector<int>>& table) {
  if (table.empty() || table.front().empty()) {
    throw Error(ErrorKind::kInvalidArgument, "rating table is empty");
  }
  const size_t categories = table.front().size();
  int64_t raters = -1;
  std::vector<int64_t> category_totals(categories, 0);
  double agreement_sum = 0.0;
  for (const auto& item : table) {
    if (item.size() != categories) {
      throw Error(ErrorKind::kInvalidArgument, "ragged rating table");
    }
    int64_t item_raters = 0;
    int64_t sum_sq = 0;
    for (size_t k = 0; k < categories; ++k) {
      if (item[k] < 0) throw Error(ErrorKind::kInvalidArgument, "negative count");
      item_raters += item[k];
      sum_sq += static_cast<int64_t>(item[k]) * item[k];
      category_totals[k] += item[k];
    }
    if (raters < 0) raters = item_raters;
    if (item_raters != raters) {
      throw Error(ErrorKind::kUnequalRaterCounts,
                  "every item must have the same number of raters");
    }
    agreement_sum += static_cast<double>(sum_sq - raters) /
                     static_cast<double>(raters * (raters - 1));
  }
  if (raters < 2) {
    throw Error(ErrorKind::kUnequalRaterCounts, "need at least two raters per item");
  }
  const auto items = static_cast<double>(table.size());
  const double p_bar = agreement_sum / items;
  const double total = items * static_cast<double>(raters);
  double p_e = 0.0;
  for (int64_t t : category_totals) {
    const double p = static_cast<double>(t) / total;
    p_e += p * p;
  }
  if (p_e >= 1.0) {
    if (p_bar == 1.0) return 1.0;
    throw Error(ErrorKind::kUndefinedAgreement, "expected agreement is 1");
  }
  return (p_bar - p_e) / (1.0 - p_e);
}

double SortedQuantile(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw Error(ErrorKind::kInvalidArgument, "empty sample");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<size_t>(std::floor(pos));
  const size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

SignificanceResult BootstrapCompare(std::span<const int> labels,
                                    std::span<const double> scores_a,
                                    std::span<const double> scores_b,
                                    double threshold_a, double threshold_b,
                                    const BootstrapOptions& options) {
  const BootstrapInputs in = PrepareBootstrap(labels, scores_a, scores_b,
                                              threshold_a, threshold_b, options);
  const int n = options.n_resamples;
  std::vector<double> diffs(n);
  std::vector<int64_t> attempts(n);
#pragma omp parallel for schedule(static)
  for (int r = 0; r < n; ++r) {
    const ResampleOutcome out = RunResample(in, options.seed, r);
    diffs[r] = out.diff;
    attempts[r] = out.attempts;
  }
  return Summarize(in, std::move(diffs), attempts, options);
}

SignificanceResult BootstrapCompareSerial(std::span<const int> labels,
                                          std::span<const double> scores_a,
                                          std::span<const double> scores_b,
                                          double threshold_a, double threshold_b,
                                          const BootstrapOptions& options) {
  const BootstrapInputs in = PrepareBootstrap(labels, scores_a, scores_b,
                                              threshold_a, threshold_b, options);
  const int n = options.n_resamples;
  std::vector<double> diffs(n);
  std::vector<int64_t> attempts(n);
  for (int r = 0; r < n; ++r) {
    const ResampleOutcome out = RunResample(in, options.seed, r);
    diffs[r] = out.diff;
    attempts[r] = out.attempts;
  }
  return Summarize(in, std::move(diffs), attempts, options);
}

}  // namespace nlic
