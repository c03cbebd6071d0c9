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

#include "nlic/harness.h"

#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <sstream>

#include "nlic/error.h"
#include "nlic/segmenter.h"

namespace nlic {
namespace {

using nlohmann::json;

std::string RequestId(const MatrixRequest& r, const BackendId& b) {
  return "doc=" + std::string(GranularityName(r.doc_granularity)) +
         ",sum=" + std::string(GranularityName(r.sum_granularity)) +
         ",backend=" + b.name + "@" + b.version;
}

int ResolveWorkers(int workers) {
  return workers > 0 ? workers : omp_get_max_threads();
}

json ThresholdJson(double t) {
  if (std::isinf(t)) return t > 0 ? "+inf" : "-inf";
  return t;
}

struct DatasetSlice {
  std::vector<size_t> validation;
  std::vector<size_t> test;
};

bool BothClasses(const std::vector<int>& labels) {
  bool pos = false;
  bool neg = false;
  for (int y : labels) (y == 1 ? pos : neg) = true;
  return pos && neg;
}

template <typename T>
std::vector<T> Gather(const std::vector<T>& values, const std::vector<size_t>& idx) {
  std::vector<T> out;
  out.reserve(idx.size());
  for (size_t i : idx) out.push_back(values[i]);
  return out;
}

}  // namespace

ZsScorer::ZsScorer(const NliBackend& backend, MatrixRequest request, ZsConfig cfg,
                   MatrixCache* cache, std::string name)
    : backend_(backend), request_(request), cfg_(cfg), cache_(cache),
      name_(std::move(name)) {}

std::string ZsScorer::config_id() const {
  return "zs:op1=" + std::string(ReduceOpName(cfg_.op1)) +
         ",op2=" + std::string(ReduceOpName(cfg_.op2)) +
         ",cats=" + FormatCategorySet(cfg_.cats) + "," +
         RequestId(request_, backend_.id());
}

double ZsScorer::Score(std::string_view document, std::string_view summary) const {
  return ScoreZs(BuildOrLoad(document, summary, request_, backend_, cache_), cfg_)
      .final_score;
}

ConvScorer::ConvScorer(const NliBackend& backend, MatrixRequest request,
                       ConvModel model, MatrixCache* cache, std::string name)
    : backend_(backend), request_(request), model_(std::move(model)), cache_(cache),
      name_(std::move(name)) {}

std::string ConvScorer::config_id() const {
  return "conv:model=" + Sha256Hex(ConvModelToJson(model_)).substr(0, 16) + "," +
         RequestId(request_, backend_.id());
}

double ConvScorer::Score(std::string_view document, std::string_view summary) const {
  return ConvScore(BuildOrLoad(document, summary, request_, backend_, cache_), model_)
      .final_score;
}

std::string MnliDocScorer::config_id() const {
  const BackendId id = backend_.id();
  return "mnli-doc:backend=" + id.name + "@" + id.version;
}

double MnliDocScorer::Score(std::string_view document, std::string_view summary) const {
  return MnliDocScore(document, summary, backend_);
}

std::string NerOverlapScorer::config_id() const {
  std::string types;
  for (const std::string& t : types_) types += t + "|";
  return "ner-overlap:extractor=" + extractor_.version() + ",types=" + types;
}

double NerOverlapScorer::Score(std::string_view document,
                               std::string_view summary) const {
  return NerOverlapScore(document, summary, extractor_, types_);
}

std::vector<ScoringItem> ItemsOf(std::span<const BenchmarkSample> samples) {
  std::vector<ScoringItem> out;
  out.reserve(samples.size());
  for (const BenchmarkSample& s : samples) out.push_back({s.document, s.summary});
  return out;
}

std::vector<ScoringItem> ItemsOf(std::span<const LabeledPair> pairs) {
  std::vector<ScoringItem> out;
  out.reserve(pairs.size());
  for (const LabeledPair& p : pairs) out.push_back({p.document, p.summary});
  return out;
}

std::vector<double> ScoreCorpus(const Scorer& scorer,
                                std::span<const ScoringItem> items, int workers) {
  std::vector<double> out(items.size());
  std::exception_ptr failure;
  const auto n = static_cast<int64_t>(items.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(ResolveWorkers(workers))
  for (int64_t i = 0; i < n; ++i) {
    try {
      out[i] = scorer.Score(items[i].document, items[i].summary);
    } catch (...) {
#pragma omp critical(nlic_score_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

std::vector<double> ScoreCorpusSerial(const Scorer& scorer,
                                      std::span<const ScoringItem> items) {
  std::vector<double> out;
  out.reserve(items.size());
  for (const ScoringItem& item : items) {
    out.push_back(scorer.Score(item.document, item.summary));
  }
  return out;
}

ScoreTable ScoreTable::Load(const std::string& path) {
  ScoreTable table;
  std::ifstream in(path);
  if (!in) return table;
  try {
    const json doc = json::parse(in);
    for (const auto& [config, entries] : doc.at("scores").items()) {
      for (const auto& [key, value] : entries.items()) {
        table.scores_[config][key] = value.get<double>();
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kSchemaMismatch,
                "malformed score table " + path + ": " + e.what());
  }
  return table;
}

void ScoreTable::Save(const std::string& path) const {
  json scores = json::object();
  for (const auto& [config, entries] : scores_) scores[config] = entries;
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw Error(ErrorKind::kIo, "cannot write " + tmp);
    out << json{{"scores", scores}}.dump() << "\n";
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    throw Error(ErrorKind::kIo, "cannot publish " + path);
  }
}

std::optional<double> ScoreTable::Find(const std::string& config_id,
                                       const std::string& sample_key) const {
  auto it = scores_.find(config_id);
  if (it == scores_.end()) return std::nullopt;
  auto jt = it->second.find(sample_key);
  if (jt == it->second.end()) return std::nullopt;
  return jt->second;
}

void ScoreTable::Insert(const std::string& config_id, const std::string& sample_key,
                        double score) {
  scores_[config_id][sample_key] = score;
}

size_t ScoreTable::size() const {
  size_t n = 0;
  for (const auto& [config, entries] : scores_) n += entries.size();
  return n;
}

std::string SampleKey(const BenchmarkSample& s) { return s.dataset + "/" + s.id; }

std::vector<double> ScoreWithTable(const Scorer& scorer,
                                   std::span<const BenchmarkSample> samples,
                                   ScoreTable& table, int workers) {
  const std::string config = scorer.config_id();
  std::vector<double> scores(samples.size());
  std::vector<size_t> missing;
  for (size_t i = 0; i < samples.size(); ++i) {
    if (auto hit = table.Find(config, SampleKey(samples[i]))) {
      scores[i] = *hit;
    } else {
      missing.push_back(i);
    }
  }
  std::vector<ScoringItem> items;
  items.reserve(missing.size());
  for (size_t i : missing) items.push_back({samples[i].document, samples[i].summary});
  const std::vector<double> fresh = ScoreCorpus(scorer, items, workers);
  for (size_t k = 0; k < missing.size(); ++k) {
    scores[missing[k]] = fresh[k];
    table.Insert(config, SampleKey(samples[missing[k]]), fresh[k]);
  }
  return scores;
}

EvalReport EvaluateScores(const std::vector<std::string>& names,
                          const std::vector<std::string>& config_ids,
                          const std::vector<std::vector<double>>& scores,
                          std::span<const BenchmarkSample> samples,
                          const EvalOptions& options) {
  if (names.size() != scores.size() || config_ids.size() != scores.size()) {
    throw Error(ErrorKind::kInvalidArgument, "scorer names and scores misaligned");
  }
  for (const auto& s : scores) {
    if (s.size() != samples.size()) {
      throw Error(ErrorKind::kInvalidArgument, "score vector length != sample count");
    }
  }
  if (options.reference && *options.reference >= scores.size()) {
    throw Error(ErrorKind::kInvalidArgument, "reference scorer index out of range");
  }

  // Datasets in first-appearance order.
  std::vector<std::string> order;
  std::map<std::string, DatasetSlice> slices;
  for (size_t i = 0; i < samples.size(); ++i) {
    auto [it, inserted] = slices.try_emplace(samples[i].dataset);
    if (inserted) order.push_back(samples[i].dataset);
    (samples[i].split == Split::kValidation ? it->second.validation : it->second.test)
        .push_back(i);
  }
  std::vector<int> labels(samples.size());
  for (size_t i = 0; i < samples.size(); ++i) labels[i] = samples[i].label;

  EvalReport report;
  report.config = {{"seed", options.seed},
                   {"n_resamples", options.n_resamples},
                   {"alphas", options.alphas},
                   {"scorers", config_ids}};
  if (options.reference) report.config["reference"] = names[*options.reference];
  for (size_t k = 0; k < scores.size(); ++k) {
    report.scorers.push_back({names[k], config_ids[k], {}, 0.0, std::nullopt});
  }

  const int n_tests =
      options.reference ? std::max<int>(1, static_cast<int>(scores.size()) - 1) : 1;
  for (const std::string& dataset : order) {
    const DatasetSlice& slice = slices.at(dataset);
    const std::vector<int> valid_labels = Gather(labels, slice.validation);
    const std::vector<int> test_labels = Gather(labels, slice.test);
    if (!BothClasses(valid_labels) || !BothClasses(test_labels)) {
      report.skipped[dataset] = "SingleClassLabels: validation and test splits "
                                "must both contain both labels";
      std::cerr << "warning: skipping dataset " << dataset
                << " (single-class split)\n";
      continue;
    }
    std::vector<double> thresholds(scores.size());
    std::vector<std::vector<double>> test_scores(scores.size());
    for (size_t k = 0; k < scores.size(); ++k) {
      const std::vector<double> valid = Gather(scores[k], slice.validation);
      test_scores[k] = Gather(scores[k], slice.test);
      const ThresholdChoice choice = SelectThreshold(valid_labels, valid);
      thresholds[k] = choice.threshold;
      DatasetResult r;
      r.dataset = dataset;
      r.threshold = choice.threshold;
      r.validation_balanced_accuracy = choice.balanced_accuracy;
      r.balanced_accuracy =
          BalancedAccuracy(test_labels, Predict(test_scores[k], choice.threshold));
      r.roc_auc = RocAuc(test_labels, test_scores[k]);
      r.sample_count = slice.test.size();
      r.validation_count = slice.validation.size();
      report.scorers[k].datasets.push_back(r);
    }
    if (!options.reference) continue;
    const size_t ref = *options.reference;
    for (size_t k = 0; k < scores.size(); ++k) {
      if (k == ref) continue;
      for (double alpha : options.alphas) {
        BootstrapOptions bo;
        bo.n_resamples = options.n_resamples;
        bo.alpha = alpha;
        bo.n_tests = n_tests;
        bo.seed = options.seed;
        report.significance.push_back(
            {dataset, names[k], names[ref], alpha, n_tests,
             BootstrapCompare(test_labels, test_scores[k], test_scores[ref],
                              thresholds[k], thresholds[ref], bo)});
      }
    }
  }
  for (ScorerReport& s : report.scorers) {
    double sum = 0.0;
    for (const DatasetResult& r : s.datasets) sum += r.balanced_accuracy;
    s.overall = s.datasets.empty() ? 0.0 : sum / static_cast<double>(s.datasets.size());
  }
  return report;
}

EvalReport Evaluate(const std::vector<const Scorer*>& scorers,
                    std::span<const BenchmarkSample> samples,
                    const EvalOptions& options, ScoreTable* table) {
  ScoreTable local;
  ScoreTable& store = table != nullptr ? *table : local;
  std::vector<std::string> names;
  std::vector<std::string> ids;
  std::vector<std::vector<double>> scores;
  for (const Scorer* s : scorers) {
    names.push_back(s->name());
    ids.push_back(s->config_id());
    scores.push_back(ScoreWithTable(*s, samples, store, options.workers));
  }
  return EvaluateScores(names, ids, scores, samples, options);
}

json ReportToJson(const EvalReport& report) {
  json scorers = json::array();
  for (const ScorerReport& s : report.scorers) {
    json datasets = json::object();
    for (const DatasetResult& r : s.datasets) {
      datasets[r.dataset] = {{"balanced_accuracy", r.balanced_accuracy},
                             {"roc_auc", r.roc_auc},
                             {"chosen_threshold", ThresholdJson(r.threshold)},
                             {"validation_balanced_accuracy",
                              r.validation_balanced_accuracy},
                             {"sample_count", r.sample_count},
                             {"validation_count", r.validation_count}};
    }
    json entry = {{"name", s.name},
                  {"config_id", s.config_id},
                  {"datasets", datasets},
                  {"overall", s.overall}};
    if (s.docs_per_min) entry["docs_per_min"] = *s.docs_per_min;
    scorers.push_back(std::move(entry));
  }
  json significance = json::array();
  for (const ComparisonResult& c : report.significance) {
    significance.push_back({{"dataset", c.dataset},
                            {"scorer", c.scorer},
                            {"reference", c.reference},
                            {"alpha", c.alpha},
                            {"n_tests", c.n_tests},
                            {"alpha_corrected", c.result.alpha_corrected},
                            {"diff_point_estimate", c.result.diff_point_estimate},
                            {"ci_low", c.result.ci_low},
                            {"ci_high", c.result.ci_high},
                            {"significant", c.result.significant},
                            {"n_resamples", c.result.n_resamples},
                            {"n_redraws", c.result.n_redraws}});
  }
  return {{"scorers", scorers},
          {"significance", significance},
          {"skipped", report.skipped},
          {"config", report.config}};
}

std::string Leaderboard(const EvalReport& report) {
  std::vector<std::string> datasets;
  if (!report.scorers.empty()) {
    for (const DatasetResult& r : report.scorers.front().datasets) {
      datasets.push_back(r.dataset);
    }
  }
  const double alpha_one = report.config.contains("alphas") &&
                                   report.config["alphas"].size() > 0
                               ? report.config["alphas"][0].get<double>()
                               : 0.05;
  const double alpha_two = report.config.contains("alphas") &&
                                   report.config["alphas"].size() > 1
                               ? report.config["alphas"][1].get<double>()
                               : 0.01;
  auto marks = [&](const std::string& scorer, const std::string& dataset) {
    std::string out;
    for (const ComparisonResult& c : report.significance) {
      if (c.scorer != scorer || c.dataset != dataset) continue;
      const bool better = c.result.significant && c.result.ci_low > 0.0;
      if (!better) continue;
      if (c.alpha == alpha_two) out = "**";
      else if (c.alpha == alpha_one && out.empty()) out = "*";
    }
    return out;
  };

  size_t name_width = 5;
  for (const ScorerReport& s : report.scorers) name_width = std::max(name_width, s.name.size());
  std::ostringstream os;
  os << std::left << std::setw(static_cast<int>(name_width) + 2) << "Model";
  for (const std::string& d : datasets) os << std::right << std::setw(std::max<int>(12, d.size() + 2)) << d;
  os << std::setw(10) << "Overall" << std::setw(12) << "Doc./min" << "\n";
  for (const ScorerReport& s : report.scorers) {
    os << std::left << std::setw(static_cast<int>(name_width) + 2) << s.name;
    for (size_t k = 0; k < datasets.size(); ++k) {
      std::ostringstream cell;
      cell << std::fixed << std::setprecision(1)
           << 100.0 * s.datasets[k].balanced_accuracy << marks(s.name, datasets[k]);
      os << std::right << std::setw(std::max<int>(12, datasets[k].size() + 2))
         << cell.str();
    }
    std::ostringstream overall;
    overall << std::fixed << std::setprecision(1) << 100.0 * s.overall;
    os << std::setw(10) << overall.str();
    if (s.docs_per_min) {
      std::ostringstream rate;
      rate << std::fixed << std::setprecision(1) << *s.docs_per_min;
      os << std::setw(12) << rate.str();
    } else {
      os << std::setw(12) << "-";
    }
    os << "\n";
  }
  for (const auto& [dataset, reason] : report.skipped) {
    os << "skipped " << dataset << ": " << reason << "\n";
  }
  return os.str();
}

double DocsPerMinute(size_t docs, double seconds) {
  if (!(seconds > 0.0)) throw Error(ErrorKind::kInvalidArgument, "non-positive duration");
  return 60.0 * static_cast<double>(docs) / seconds;
}

ThroughputReport MeasureThroughput(const Scorer& scorer,
                                   std::span<const ScoringItem> corpus,
                                   size_t warmup_docs, int workers,
                                   double load_seconds) {
  if (corpus.empty()) throw Error(ErrorKind::kInvalidArgument, "empty corpus");
  ThroughputReport report;
  report.docs = corpus.size();
  report.load_seconds = load_seconds;
  report.warmup_docs = std::min(warmup_docs, corpus.size());
  size_t sentences = 0;
  for (const ScoringItem& item : corpus) sentences += SplitSentences(item.document).size();
  report.mean_sentences_per_doc =
      static_cast<double>(sentences) / static_cast<double>(corpus.size());

  ScoreCorpus(scorer, corpus.first(report.warmup_docs), workers);
  const auto start = std::chrono::steady_clock::now();
  ScoreCorpus(scorer, corpus, workers);
  report.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  report.docs_per_min = DocsPerMinute(report.docs, report.seconds);
  return report;
}

json ThroughputToJson(const ThroughputReport& r) {
  return {{"docs", r.docs},
          {"warmup_docs", r.warmup_docs},
          {"seconds", r.seconds},
          {"docs_per_min", r.docs_per_min},
          {"mean_sentences_per_doc", r.mean_sentences_per_doc},
          {"load_seconds", r.load_seconds}};
}

}  // namespace nlic
