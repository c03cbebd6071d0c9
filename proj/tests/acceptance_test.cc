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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails or exceeds its time budget.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "nlic/aggregator.h"
#include "nlic/baselines.h"
#include "nlic/harness.h"
#include "nlic/matrix.h"
#include "nlic/metrics.h"
#include "nlic/synthetic.h"
#include "nlic/trainer.h"
#include "oracles.h"
#include "test_util.h"

namespace nlic {
namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

// Collects failures; the first failure message wins.
class Check {
 public:
  void That(bool cond, const std::string& what) {
    if (!cond && outcome_.ok) {
      outcome_.ok = false;
      outcome_.detail = what;
    }
  }
  void Note(const std::string& s) {
    if (outcome_.ok) outcome_.detail = s;
  }
  Outcome result() const { return outcome_; }

 private:
  Outcome outcome_;
};

std::string Fmt(double v, int digits = 6) {
  std::ostringstream os;
  os << std::setprecision(digits) << v;
  return os.str();
}

PairMatrix WorkedExampleMatrix(bool drop_last_sentence) {
  const FixtureBackend fx = FixtureBackend::FromFile(testing::DataPath("example_fixture.json"));
  const BlockList doc = SplitBlocks(testing::ReadFile(testing::DataPath("example_document.txt")),
                                    Granularity::kSentence, Side::kDocument);
  BlockList sum = SplitBlocks(testing::ReadFile(testing::DataPath("example_summary.txt")),
                              Granularity::kSentence, Side::kSummary);
  if (drop_last_sentence) sum.blocks.pop_back();
  return BuildPairMatrix(doc, sum, fx);
}

Outcome WorkedExampleEndToEnd() {
  Check c;
  const double full = ScoreZs(WorkedExampleMatrix(false)).final_score;
  const double dropped = ScoreZs(WorkedExampleMatrix(true)).final_score;
  c.That(std::abs(full - 0.67) <= 1e-6, "full summary scored " + Fmt(full, 17));
  c.That(std::abs(dropped - 0.985) <= 1e-6, "two-sentence summary scored " + Fmt(dropped, 17));
  c.Note("final " + Fmt(full) + ", without sentence 3 " + Fmt(dropped));
  return c.result();
}

Outcome BinningFidelity() {
  Check c;
  const PairMatrix mat = WorkedExampleMatrix(false);
  const std::vector<std::vector<double>> expected_rows = {
      {2, 3, 4}, {0, 0, 0}, {1, 0, 0}, {0, 0, 0}, {1, 1, 0}};
  const ScalarGrid e = SelectCategoryView(mat, CategorySet::EntailmentOnly())[0];
  for (size_t j = 0; j < mat.n; ++j) {
    const std::vector<double> col = e.Column(j);
    const Histogram hist = BinColumn(col, 5);
    for (size_t k = 0; k < 5; ++k) {
      c.That(hist.counts[k] == expected_rows[k][j],
             "bin " + std::to_string(k) + " of column " + std::to_string(j));
    }
  }
  c.Note("bin(X_pair) reproduced at h=5");
  return c.result();
}

Outcome MajorityClassBalancedAccuracy() {
  Check c;
  std::mt19937_64 rng(101);
  for (int t = 0; t < 100; ++t) {
    const size_t n = 2 + rng() % 300;
    std::vector<int> labels(n);
    for (size_t i = 0; i < n; ++i) labels[i] = i < 2 ? static_cast<int>(i) : rng() % 4 != 0;
    const int majority = 2 * std::count(labels.begin(), labels.end(), 1) >= static_cast<long>(n);
    const std::vector<int> preds(n, majority);
    const std::vector<int> minority(n, 1 - majority);
    c.That(BalancedAccuracy(labels, preds) == 0.5, "majority predictor, trial " + std::to_string(t));
    c.That(BalancedAccuracy(labels, minority) == 0.5, "minority predictor, trial " + std::to_string(t));
  }
  c.Note("100 label sets, exactly 0.5");
  return c.result();
}

Outcome RocAucOracle() {
  Check c;
  std::mt19937_64 rng(102);
  double worst = 0.0;
  for (int t = 0; t < 200; ++t) {
    const size_t n = 2 + rng() % 499;
    std::vector<int> labels(n);
    std::vector<double> scores(n);
    const int levels = 2 + static_cast<int>(rng() % 20);  // coarse grid forces ties
    for (size_t i = 0; i < n; ++i) {
      labels[i] = i < 2 ? static_cast<int>(i) : static_cast<int>(rng() % 2);
      scores[i] = static_cast<double>(rng() % levels) / levels + 0.1 * labels[i];
    }
    worst = std::max(worst, std::abs(RocAuc(labels, scores) - oracle::PairwiseAuc(labels, scores)));
  }
  c.That(worst <= 1e-9, "max deviation " + Fmt(worst));
  c.Note("200 instances, max deviation " + Fmt(worst));
  return c.result();
}

Outcome GradientCorrectness() {
  Check c;
  std::mt19937_64 rng(103);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int draw = 0; draw < 20; ++draw) {
    const size_t h = 2 + rng() % 20;
    const CategorySet cats = draw % 2 ? CategorySet::All() : CategorySet::EntailmentOnly();
    ConvModel model = ConvModel::Zeros(h, cats);
    for (double& w : model.weights) w = g(rng);
    model.bias = g(rng);
    std::vector<TrainExample> batch(1 + rng() % 8);
    std::vector<oracle::Example> ref;
    for (auto& ex : batch) {
      ex.label = static_cast<int>(rng() % 2);
      ex.sentence_features.resize(1 + rng() % 4);
      for (auto& f : ex.sentence_features) {
        f.resize(model.feature_size());
        for (double& v : f) v = u(rng);
      }
      ref.push_back({ex.sentence_features, ex.label});
    }
    const Gradient analytic = ComputeGradient(model, batch);
    const std::vector<double> numeric =
        oracle::FiniteDifferenceGradient(model.weights, model.bias, ref, 1e-6);
    for (size_t k = 0; k < numeric.size(); ++k) {
      const double a = k < analytic.weights.size() ? analytic.weights[k] : analytic.bias;
      worst = std::max(worst, std::abs(a - numeric[k]) / std::max(std::abs(numeric[k]), 1e-3));
    }
  }
  c.That(worst < 1e-5, "max relative error " + Fmt(worst));
  c.Note("20 draws, max relative error " + Fmt(worst, 3));
  return c.result();
}

Outcome TrainingCapability() {
  Check c;
  MockBackend mock;
  TrainConfig cfg;
  cfg.seed = 7;
  const auto train_pairs = MakeSeparableCorpus(2000, 1, "train");
  const auto valid_pairs = MakeSeparableCorpus(500, 2, "valid");
  const auto train = PrecomputeExamples(train_pairs, mock, MatrixRequest{}, cfg);
  const auto valid = PrecomputeExamples(valid_pairs, mock, MatrixRequest{}, cfg);
  const TrainResult a = Train(train, valid, cfg);
  const TrainResult b = Train(train, valid, cfg);
  const double ba = a.history[a.best_epoch - 1].valid_balanced_accuracy;
  c.That(ba >= 0.95, "validation balanced accuracy " + Fmt(ba));
  c.That(a.model.weights == b.model.weights && a.model.bias == b.model.bias,
         "weights differ between identical runs");
  // Independent check of the reported accuracy from the returned model.
  std::vector<int> labels;
  std::vector<double> scores;
  for (size_t i = 0; i < valid.size(); ++i) {
    labels.push_back(valid[i].label);
    scores.push_back(ConvScoreFeatures(a.model, valid[i].sentence_features).final_score);
  }
  const double recomputed = SelectThreshold(labels, scores).balanced_accuracy;
  c.That(recomputed == ba, "recomputed accuracy " + Fmt(recomputed));
  c.Note("validation balanced accuracy " + Fmt(ba, 4) + " at epoch " +
         std::to_string(a.best_epoch) + ", bitwise reproducible");
  return c.result();
}

Outcome ThresholdOptimality() {
  Check c;
  std::mt19937_64 rng(104);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int t = 0; t < 100; ++t) {
    const size_t n = 2 + rng() % 99;
    std::vector<int> labels(n);
    std::vector<double> scores(n);
    for (size_t i = 0; i < n; ++i) {
      labels[i] = i < 2 ? static_cast<int>(i) : static_cast<int>(rng() % 2);
      scores[i] = labels[i] * 0.8 + g(rng);
      if (t % 3 == 0) scores[i] = std::round(scores[i] * 2.0) / 2.0;
    }
    const ThresholdChoice got = SelectThreshold(labels, scores);
    const oracle::ScanResult want = oracle::ExhaustiveThresholdScan(labels, scores);
    c.That(std::abs(got.balanced_accuracy - want.balanced_accuracy) <= 1e-12,
           "instance " + std::to_string(t) + ": " + Fmt(got.balanced_accuracy) + " vs " +
               Fmt(want.balanced_accuracy));
    c.That(BalancedAccuracy(labels, Predict(scores, got.threshold)) == got.balanced_accuracy,
           "threshold does not reproduce its accuracy, instance " + std::to_string(t));
  }
  c.Note("100 instances match the exhaustive scan");
  return c.result();
}

Outcome BootstrapSanity() {
  Check c;
  std::mt19937_64 rng(105);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<int> labels(200);
  std::vector<double> noisy(200), perfect(200), anti(200);
  for (size_t i = 0; i < 200; ++i) {
    labels[i] = static_cast<int>(i % 2);
    noisy[i] = 0.3 * labels[i] + u(rng);
    perfect[i] = labels[i] ? 0.9 : 0.1;
    anti[i] = labels[i] ? 0.1 : 0.9;
  }
  BootstrapOptions opt;
  opt.n_resamples = 10000;
  opt.seed = 11;
  const SignificanceResult same = BootstrapCompare(labels, noisy, noisy, 0.5, 0.5, opt);
  c.That(!same.significant && same.ci_low <= 0.0 && same.ci_high >= 0.0,
         "identical scorers flagged significant");
  opt.alpha = 0.01;
  opt.n_tests = 2;
  const SignificanceResult strong = BootstrapCompare(labels, perfect, anti, 0.5, 0.5, opt);
  c.That(strong.alpha_corrected == 0.005, "corrected alpha " + Fmt(strong.alpha_corrected));
  c.That(strong.significant, "perfect vs anti-perfect not significant");
  const SignificanceResult again = BootstrapCompare(labels, perfect, anti, 0.5, 0.5, opt);
  c.That(again == strong, "second run with the same seed differs");
  const SignificanceResult serial =
      BootstrapCompareSerial(labels, noisy, noisy, 0.5, 0.5, BootstrapOptions{10000, 0.05, 1, 11});
  c.That(serial == same, "serial and parallel resampling differ");
  c.Note("10000 resamples; perfect vs anti-perfect CI [" + Fmt(strong.ci_low) + ", " +
         Fmt(strong.ci_high) + "]");
  return c.result();
}

Outcome FleissKappaCriterion() {
  Check c;
  std::mt19937_64 rng(106);
  for (int t = 0; t < 20; ++t) {
    const int raters = 2 + static_cast<int>(rng() % 6);
    std::vector<std::vector<int>> table(1 + rng() % 15, std::vector<int>(2 + rng() % 4, 0));
    for (auto& item : table) item[rng() % item.size()] = raters;
    c.That(FleissKappa(table) == 1.0, "perfect agreement gave " + Fmt(FleissKappa(table)));
  }
  double worst = 0.0;
  for (int t = 0; t < 50; ++t) {
    const int raters = 2 + static_cast<int>(rng() % 8);
    std::vector<std::vector<int>> table(5 + rng() % 30, std::vector<int>(2 + rng() % 4, 0));
    for (auto& item : table) {
      for (int r = 0; r < raters; ++r) ++item[rng() % item.size()];
    }
    worst = std::max(worst, std::abs(FleissKappa(table) - oracle::FleissKappa(table)));
  }
  c.That(worst <= 1e-12, "max deviation " + Fmt(worst));
  c.Note("50 random tables, max deviation " + Fmt(worst, 3));
  return c.result();
}

Outcome IdentityBridge() {
  Check c;
  MockBackend mock;
  SyntheticText gen(107);
  const MatrixRequest full{Granularity::kFull, Granularity::kFull};
  for (int t = 0; t < 20; ++t) {
    const std::vector<std::string> doc_sentences = gen.Sentences(gen.Uniform(3, 12));
    const std::string doc = JoinSentences(doc_sentences);
    std::vector<std::string> sum_sentences = {doc_sentences[gen.Uniform(0, doc_sentences.size() - 1)]};
    if (gen.Coin()) sum_sentences.push_back(gen.Sentence());
    const std::string sum = JoinSentences(sum_sentences);
    const double direct = MnliDocScore(doc, sum, mock);
    const double zs = ScoreZs(BuildOrLoad(doc, sum, full, mock, nullptr)).final_score;
    c.That(direct == zs, "document " + std::to_string(t) + ": " + Fmt(direct, 17) + " vs " +
                             Fmt(zs, 17));
  }
  c.Note("20 documents, bitwise equal");
  return c.result();
}

Outcome ThroughputHarness() {
  Check c;
  // A small per-pair cost stands in for model inference so that timing is
  // dominated by the pipeline rather than by scheduler noise.
  MockBackend mock(std::chrono::microseconds(100));
  const auto docs = MakeSyntheticDocuments(100, 20, 108);
  const auto items = ItemsOf(docs);
  ZsScorer plain(mock, {}, {});
  std::vector<double> rates;
  for (int run = 0; run < 5; ++run) {
    rates.push_back(MeasureThroughput(plain, items, 10, 1).docs_per_min);
  }
  double mean = 0.0;
  for (double r : rates) mean += r / rates.size();
  double var = 0.0;
  for (double r : rates) var += (r - mean) * (r - mean) / (rates.size() - 1);
  const double cov = std::sqrt(var) / mean;
  c.That(cov < 0.10, "coefficient of variation " + Fmt(cov));

  testing::TempDir dir;
  MatrixCache cache(dir.path());
  ZsScorer cached(mock, {}, {}, &cache);
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<double> cold = ScoreCorpus(cached, items, 1);
  const auto t1 = std::chrono::steady_clock::now();
  const std::vector<double> warm = ScoreCorpus(cached, items, 1);
  const auto t2 = std::chrono::steady_clock::now();
  const double cold_s = std::chrono::duration<double>(t1 - t0).count();
  const double warm_s = std::chrono::duration<double>(t2 - t1).count();
  c.That(cold == warm, "cached scores differ");
  c.That(cold_s >= 5.0 * warm_s, "cold " + Fmt(cold_s) + " s vs warm " + Fmt(warm_s) + " s");
  c.Note(Fmt(mean, 6) + " docs/min, CoV " + Fmt(cov, 3) + ", cold/warm " +
         Fmt(cold_s / warm_s, 3) + "x");
  return c.result();
}

struct Criterion {
  std::string name;
  double limit_seconds;
  std::function<Outcome()> run;
};

}  // namespace
}  // namespace nlic

int main() {
  using nlic::Criterion;
  const std::vector<Criterion> criteria = {
      {"worked-example-end-to-end", 1.0, nlic::WorkedExampleEndToEnd},
      {"binning-fidelity", 1.0, nlic::BinningFidelity},
      {"balanced-accuracy-majority", 10.0, nlic::MajorityClassBalancedAccuracy},
      {"roc-auc-oracle", 10.0, nlic::RocAucOracle},
      {"gradient-finite-differences", 10.0, nlic::GradientCorrectness},
      {"training-separable-corpus", 60.0, nlic::TrainingCapability},
      {"threshold-optimality", 5.0, nlic::ThresholdOptimality},
      {"bootstrap-sanity", 30.0, nlic::BootstrapSanity},
      {"fleiss-kappa", 10.0, nlic::FleissKappaCriterion},
      {"mnli-doc-identity", 10.0, nlic::IdentityBridge},
      {"throughput-harness", 60.0, nlic::ThroughputHarness},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    nlic::Outcome outcome;
    const auto start = std::chrono::steady_clock::now();
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (outcome.ok && seconds >= c.limit_seconds) {
      outcome = {false, "took " + nlic::Fmt(seconds, 3) + " s"};
    }
    failures += outcome.ok ? 0 : 1;
    std::cout << (outcome.ok ? "PASS " : "FAIL ") << std::left << std::setw(30) << c.name
              << std::right << std::fixed << std::setprecision(3) << std::setw(8) << seconds
              << " s (limit " << std::setprecision(0) << c.limit_seconds << " s)  "
              << std::defaultfloat << outcome.detail << std::endl;
  }
  std::cout << (failures == 0 ? "ALL PASS" : std::to_string(failures) + " FAILED") << std::endl;
  return failures == 0 ? 0 : 1;
}
