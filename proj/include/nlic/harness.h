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

#ifndef NLIC_HARNESS_H_
#define NLIC_HARNESS_H_

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "nlic/aggregator.h"
#include "nlic/baselines.h"
#include "nlic/datasets.h"
#include "nlic/matrix.h"
#include "nlic/metrics.h"

namespace nlic {

// Scorers must be safe to call concurrently; higher score = more consistent.
class Scorer {
 public:
  virtual ~Scorer() = default;
  virtual std::string name() const = 0;
  // Stable identity of the scorer configuration; keys persisted scores.
  virtual std::string config_id() const = 0;
  virtual double Score(std::string_view document, std::string_view summary) const = 0;
};

class ZsScorer : public Scorer {
 public:
  ZsScorer(const NliBackend& backend, MatrixRequest request, ZsConfig cfg,
           MatrixCache* cache = nullptr, std::string name = "zs");
  std::string name() const override { return name_; }
  std::string config_id() const override;
  double Score(std::string_view document, std::string_view summary) const override;

 private:
  const NliBackend& backend_;
  MatrixRequest request_;
  ZsConfig cfg_;
  MatrixCache* cache_;
  std::string name_;
};

class ConvScorer : public Scorer {
 public:
  ConvScorer(const NliBackend& backend, MatrixRequest request, ConvModel model,
             MatrixCache* cache = nullptr, std::string name = "conv");
  std::string name() const override { return name_; }
  std::string config_id() const override;
  double Score(std::string_view document, std::string_view summary) const override;

 private:
  const NliBackend& backend_;
  MatrixRequest request_;
  ConvModel model_;
  MatrixCache* cache_;
  std::string name_;
};

class MnliDocScorer : public Scorer {
 public:
  explicit MnliDocScorer(const NliBackend& backend, std::string name = "mnli-doc")
      : backend_(backend), name_(std::move(name)) {}
  std::string name() const override { return name_; }
  std::string config_id() const override;
  double Score(std::string_view document, std::string_view summary) const override;

 private:
  const NliBackend& backend_;
  std::string name_;
};

class NerOverlapScorer : public Scorer {
 public:
  explicit NerOverlapScorer(const EntityExtractor& extractor,
                            std::set<std::string> types = DefaultEntityTypes(),
                            std::string name = "ner-overlap")
      : extractor_(extractor), types_(std::move(types)), name_(std::move(name)) {}
  std::string name() const override { return name_; }
  std::string config_id() const override;
  double Score(std::string_view document, std::string_view summary) const override;

 private:
  const EntityExtractor& extractor_;
  std::set<std::string> types_;
  std::string name_;
};

struct ScoringItem {
  std::string_view document;
  std::string_view summary;
};

std::vector<ScoringItem> ItemsOf(std::span<const BenchmarkSample> samples);
std::vector<ScoringItem> ItemsOf(std::span<const LabeledPair> pairs);

// Scores every item with a pool of `workers` OpenMP threads (0 = all
// logical CPUs). Output order matches input order.
std::vector<double> ScoreCorpus(const Scorer& scorer,
                                std::span<const ScoringItem> items,
                                int workers = 0);
std::vector<double> ScoreCorpusSerial(const Scorer& scorer,
                                      std::span<const ScoringItem> items);

// Persisted (scorer config, sample) -> score map; metrics are recomputed
// from it without re-running inference.
class ScoreTable {
 public:
  ScoreTable() = default;
  static ScoreTable Load(const std::string& path);  // missing file -> empty
  void Save(const std::string& path) const;

  std::optional<double> Find(const std::string& config_id,
                             const std::string& sample_key) const;
  void Insert(const std::string& config_id, const std::string& sample_key,
              double score);
  size_t size() const;

 private:
  std::map<std::string, std::map<std::string, double>> scores_;
};

std::string SampleKey(const BenchmarkSample& s);

// Scores missing from `table` are computed (in parallel) and inserted.
std::vector<double> ScoreWithTable(const Scorer& scorer,
                                   std::span<const BenchmarkSample> samples,
                                   ScoreTable& table, int workers = 0);

struct EvalOptions {
  uint64_t seed = 0;
  int n_resamples = 10000;
  std::vector<double> alphas = {0.05, 0.01};
  // Index of the scorer every other scorer is tested against; none = no
  // significance tests.
  std::optional<size_t> reference;
  int workers = 0;
};

struct DatasetResult {
  std::string dataset;
  double balanced_accuracy = 0.0;  // test split, validation threshold
  double roc_auc = 0.0;
  double threshold = 0.0;
  double validation_balanced_accuracy = 0.0;
  size_t sample_count = 0;  // test samples
  size_t validation_count = 0;
};

struct ScorerReport {
  std::string name;
  std::string config_id;
  std::vector<DatasetResult> datasets;
  double overall = 0.0;  // unweighted mean of per-dataset balanced accuracy
  std::optional<double> docs_per_min;
};

struct ComparisonResult {
  std::string dataset;
  std::string scorer;
  std::string reference;
  double alpha = 0.0;
  int n_tests = 1;
  SignificanceResult result;
};

struct EvalReport {
  std::vector<ScorerReport> scorers;
  std::vector<ComparisonResult> significance;
  std::map<std::string, std::string> skipped;  // dataset -> reason
  nlohmann::json config;
};

// Metric path over precomputed scores: `scores[k][i]` is scorer k on
// samples[i]. Per dataset the threshold comes from validation, metrics from
// test. Datasets without both classes in both splits are skipped.
EvalReport EvaluateScores(const std::vector<std::string>& names,
                          const std::vector<std::string>& config_ids,
                          const std::vector<std::vector<double>>& scores,
                          std::span<const BenchmarkSample> samples,
                          const EvalOptions& options);

EvalReport Evaluate(const std::vector<const Scorer*>& scorers,
                    std::span<const BenchmarkSample> samples,
                    const EvalOptions& options, ScoreTable* table = nullptr);

nlohmann::json ReportToJson(const EvalReport& report);
// Model x dataset balanced accuracy (percent) with Overall and Doc./min
// columns; "*" / "**" mark significant improvements over the reference at
// the first / second alpha.
std::string Leaderboard(const EvalReport& report);

struct ThroughputReport {
  size_t docs = 0;
  size_t warmup_docs = 0;
  double seconds = 0.0;
  double docs_per_min = 0.0;
  double mean_sentences_per_doc = 0.0;
  double load_seconds = 0.0;
};

double DocsPerMinute(size_t docs, double seconds);

// Scores the first `warmup_docs` items untimed, then times a full pass.
ThroughputReport MeasureThroughput(const Scorer& scorer,
                                   std::span<const ScoringItem> corpus,
                                   size_t warmup_docs = 10, int workers = 0,
                                   double load_seconds = 0.0);

nlohmann::json ThroughputToJson(const ThroughputReport& report);

}  // namespace nlic

#endif  // NLIC_HARNESS_H_
