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

#include "nlic/trainer.h"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <random>

#include "nlic/error.h"
#include "nlic/metrics.h"

namespace nlic {
namespace {

void CheckShapes(const ConvModel& model, std::span<const TrainExample> batch) {
  if (batch.empty()) throw Error(ErrorKind::kInvalidArgument, "empty batch");
  for (const TrainExample& ex : batch) {
    if (ex.sentence_features.empty()) {
      throw Error(ErrorKind::kDimensionZero, "example without summary sentences");
    }
    for (const auto& f : ex.sentence_features) {
      if (f.size() != model.weights.size()) {
        throw Error(ErrorKind::kModelShapeMismatch,
                    "feature length " + std::to_string(f.size()) +
                        " != weight length " + std::to_string(model.weights.size()));
      }
    }
  }
}

void CheckBothLabels(std::span<const TrainExample> set, const char* what) {
  bool pos = false;
  bool neg = false;
  for (const TrainExample& ex : set) (ex.label == 1 ? pos : neg) = true;
  if (!pos || !neg) {
    throw Error(ErrorKind::kDegenerateLabels,
                std::string(what) + " set must contain both labels");
  }
}

// Portable Fisher-Yates; std::shuffle's draw sequence is library-specific.
void Shuffle(std::vector<size_t>& order, std::mt19937_64& rng) {
  for (size_t i = order.size(); i > 1; --i) {
    const auto j = static_cast<size_t>(
        (static_cast<unsigned __int128>(rng()) * i) >> 64);
    std::swap(order[i - 1], order[j]);
  }
}

double FinalScore(const ConvModel& model, const TrainExample& ex) {
  double sum = 0.0;
  for (const auto& f : ex.sentence_features) sum += ConvSentenceScore(model, f);
  return sum / static_cast<double>(ex.sentence_features.size());
}

TrainExample ExampleFor(const LabeledPair& record, const NliBackend& backend,
                        const MatrixRequest& request, const TrainConfig& cfg,
                        MatrixCache* cache) {
  const PairMatrix mat =
      BuildOrLoad(record.document, record.summary, request, backend, cache);
  return {ColumnFeatures(mat, cfg.h, cfg.cats, cfg.normalize_histograms),
          record.label};
}

}  // namespace

double Loss(double final_score, int label) {
  const double s = std::clamp(final_score, kProbabilityClamp, 1.0 - kProbabilityClamp);
  return label == 1 ? -std::log(s) : -std::log(1.0 - s);
}

double MeanLoss(const ConvModel& model, std::span<const TrainExample> batch) {
  CheckShapes(model, batch);
  double total = 0.0;
  for (const TrainExample& ex : batch) total += Loss(FinalScore(model, ex), ex.label);
  return total / static_cast<double>(batch.size());
}

Gradient ComputeGradient(const ConvModel& model, std::span<const TrainExample> batch) {
  CheckShapes(model, batch);
  Gradient grad{std::vector<double>(model.weights.size(), 0.0), 0.0};
  std::vector<double> sentence_scores;
  for (const TrainExample& ex : batch) {
    const size_t n = ex.sentence_features.size();
    sentence_scores.resize(n);
    double final_score = 0.0;
    for (size_t j = 0; j < n; ++j) {
      sentence_scores[j] = ConvSentenceScore(model, ex.sentence_features[j]);
      final_score += sentence_scores[j];
    }
    final_score /= static_cast<double>(n);
    // Inside the clamp, dL/dS = (S - y) / (S (1 - S)); outside it is zero.
    if (final_score <= kProbabilityClamp || final_score >= 1.0 - kProbabilityClamp) {
      continue;
    }
    const double y = ex.label;
    const double dloss_dfinal = (final_score - y) / (final_score * (1.0 - final_score));
    for (size_t j = 0; j < n; ++j) {
      const double s = sentence_scores[j];
      const double coeff = dloss_dfinal * s * (1.0 - s) / static_cast<double>(n);
      grad.bias += coeff;
      const auto& f = ex.sentence_features[j];
      for (size_t k = 0; k < f.size(); ++k) grad.weights[k] += coeff * f[k];
    }
  }
  const auto scale = 1.0 / static_cast<double>(batch.size());
  for (double& g : grad.weights) g *= scale;
  grad.bias *= scale;
  return grad;
}

void AdamStep(std::span<double> params, std::span<const double> grads,
              AdamState& state, const AdamConfig& cfg) {
  if (params.size() != grads.size() || state.m.size() != params.size() ||
      state.v.size() != params.size()) {
    throw Error(ErrorKind::kModelShapeMismatch, "Adam state/param size mismatch");
  }
  ++state.t;
  const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.t));
  const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.t));
  for (size_t i = 0; i < params.size(); ++i) {
    state.m[i] = cfg.beta1 * state.m[i] + (1.0 - cfg.beta1) * grads[i];
    state.v[i] = cfg.beta2 * state.v[i] + (1.0 - cfg.beta2) * grads[i] * grads[i];
    const double m_hat = state.m[i] / bc1;
    const double v_hat = state.v[i] / bc2;
    params[i] -= cfg.learning_rate * m_hat / (std::sqrt(v_hat) + cfg.eps);
  }
}

std::vector<TrainExample> StratifiedSubsample(std::span<const TrainExample> examples,
                                              size_t size, uint64_t seed) {
  if (size >= examples.size()) return {examples.begin(), examples.end()};
  std::vector<size_t> pos;
  std::vector<size_t> neg;
  for (size_t i = 0; i < examples.size(); ++i) {
    (examples[i].label == 1 ? pos : neg).push_back(i);
  }
  const auto want_pos = static_cast<size_t>(std::llround(
      static_cast<double>(size) * static_cast<double>(pos.size()) /
      static_cast<double>(examples.size())));
  const size_t take_pos = std::min(want_pos, pos.size());
  const size_t take_neg = std::min(size - take_pos, neg.size());
  std::mt19937_64 rng(seed);
  Shuffle(pos, rng);
  Shuffle(neg, rng);
  std::vector<size_t> chosen(pos.begin(), pos.begin() + take_pos);
  chosen.insert(chosen.end(), neg.begin(), neg.begin() + take_neg);
  std::sort(chosen.begin(), chosen.end());
  std::vector<TrainExample> out;
  out.reserve(chosen.size());
  for (size_t i : chosen) out.push_back(examples[i]);
  return out;
}

TrainResult Train(std::span<const TrainExample> train_set,
                  std::span<const TrainExample> valid_set, const TrainConfig& cfg) {
  if (cfg.batch_size < 1 || !(cfg.adam.learning_rate > 0.0) || cfg.max_epochs < 1) {
    throw Error(ErrorKind::kInvalidArgument,
                "batch_size, learning_rate and max_epochs must be positive");
  }
  if (train_set.empty() || valid_set.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "train and validation sets must be non-empty");
  }
  CheckBothLabels(train_set, "training");
  CheckBothLabels(valid_set, "validation");

  const std::vector<TrainExample> train =
      StratifiedSubsample(train_set, cfg.subsample_size, cfg.seed);
  ConvModel model = ConvModel::Zeros(cfg.h, cfg.cats, cfg.normalize_histograms);
  CheckShapes(model, train);
  CheckShapes(model, valid_set);

  const size_t n_params = model.weights.size() + 1;
  AdamState state = AdamState::Zeros(n_params);
  std::vector<double> params(n_params, 0.0);
  std::vector<double> flat_grad(n_params, 0.0);
  std::vector<int> valid_labels;
  for (const TrainExample& ex : valid_set) valid_labels.push_back(ex.label);

  std::mt19937_64 rng(cfg.seed ^ 0xA5A5A5A5A5A5A5A5ull);
  std::vector<size_t> order(train.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::vector<TrainExample> batch;

  TrainResult result;
  result.model = model;
  double best_ba = -1.0;
  int since_best = 0;
  for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    Shuffle(order, rng);
    for (size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const size_t end = std::min(order.size(), start + cfg.batch_size);
      batch.clear();
      for (size_t k = start; k < end; ++k) batch.push_back(train[order[k]]);
      const Gradient g = ComputeGradient(model, batch);
      std::copy(g.weights.begin(), g.weights.end(), flat_grad.begin());
      flat_grad.back() = g.bias;
      AdamStep(params, flat_grad, state, cfg.adam);
      std::copy(params.begin(), params.end() - 1, model.weights.begin());
      model.bias = params.back();
    }
    std::vector<double> valid_scores;
    valid_scores.reserve(valid_set.size());
    for (const TrainExample& ex : valid_set) valid_scores.push_back(FinalScore(model, ex));
    const ThresholdChoice choice = SelectThreshold(valid_labels, valid_scores);
    result.history.push_back(
        {epoch, MeanLoss(model, train), choice.balanced_accuracy, choice.threshold});
    if (choice.balanced_accuracy > best_ba) {
      best_ba = choice.balanced_accuracy;
      result.model = model;
      result.best_epoch = epoch;
      since_best = 0;
    } else if (++since_best >= cfg.patience) {
      break;
    }
  }
  return result;
}

std::vector<TrainExample> PrecomputeExamples(std::span<const LabeledPair> records,
                                             const NliBackend& backend,
                                             const MatrixRequest& request,
                                             const TrainConfig& cfg,
                                             MatrixCache* cache) {
  std::vector<TrainExample> out(records.size());
  std::exception_ptr failure;
  const auto n = static_cast<int64_t>(records.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (int64_t i = 0; i < n; ++i) {
    try {
      out[i] = ExampleFor(records[i], backend, request, cfg, cache);
    } catch (...) {
#pragma omp critical(nlic_precompute_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

std::vector<TrainExample> PrecomputeExamplesSerial(
    std::span<const LabeledPair> records, const NliBackend& backend,
    const MatrixRequest& request, const TrainConfig& cfg, MatrixCache* cache) {
  std::vector<TrainExample> out;
  out.reserve(records.size());
  for (const LabeledPair& r : records) {
    out.push_back(ExampleFor(r, backend, request, cfg, cache));
  }
  return out;
}

}  // namespace nlic
