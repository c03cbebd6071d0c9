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

// nlic command-line tool: score, train, ingest, benchmark, throughput, synth.
//
// Every long flag of a command may also appear as a key in the JSON file
// given to --config. Config values are placed before the command-line flags,
// so flags given on the command line win.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "nlic/aggregator.h"
#include "nlic/baselines.h"
#include "nlic/datasets.h"
#include "nlic/error.h"
#include "nlic/harness.h"
#include "nlic/matrix.h"
#include "nlic/nli_backend.h"
#include "nlic/segmenter.h"
#include "nlic/synthetic.h"
#include "nlic/trainer.h"

namespace nlic {
namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitBackend = 3;
constexpr int kExitData = 4;

int ExitCodeFor(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kBackendUnavailable:
    case ErrorKind::kFixtureMiss:
    case ErrorKind::kExtractorUnavailable:
      return kExitBackend;
    case ErrorKind::kSchemaMismatch:
    case ErrorKind::kDegenerateLabels:
    case ErrorKind::kSingleClassLabels:
    case ErrorKind::kOutOfRangeScore:
    case ErrorKind::kModelShapeMismatch:
    case ErrorKind::kUnequalRaterCounts:
    case ErrorKind::kUndefinedAgreement:
      return kExitData;
    default:
      return kExitInput;
  }
}

int ReportError(std::string_view kind, const std::string& message, int code) {
  std::cerr << json{{"error", kind}, {"message", message}, {"exit_code", code}}.dump()
            << std::endl;
  return code;
}

std::string ReadText(const std::string& path) {
  if (path == "-") {
    std::stringstream buffer;
    buffer << std::cin.rdbuf();
    return buffer.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot read " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void WriteText(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path);
  out << text;
  if (!out) throw Error(ErrorKind::kIo, "write failed for " + path);
}

// ---- shared flag groups ----------------------------------------------------

struct BackendFlags {
  std::string kind = "mock";
  std::string fixture;
  std::string endpoint = "http://127.0.0.1:8080";
  std::string backend_version = "unversioned";
  size_t remote_batch = 64;
  int mock_cost_us = 0;
};

void AddBackendFlags(CLI::App* cmd, BackendFlags& f) {
  cmd->add_option("--backend", f.kind, "NLI backend")
      ->check(CLI::IsMember({"mock", "fixture", "remote"}))
      ->capture_default_str();
  cmd->add_option("--fixture", f.fixture, "fixture JSON for --backend fixture");
  cmd->add_option("--endpoint", f.endpoint, "scheme://host:port of the /nli service")
      ->capture_default_str();
  cmd->add_option("--backend-version", f.backend_version,
                  "version tag of the remote model (part of cache keys)")
      ->capture_default_str();
  cmd->add_option("--remote-batch", f.remote_batch, "pairs per /nli request")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--mock-cost-us", f.mock_cost_us,
                  "simulated mock inference cost per pair, microseconds")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
}

std::unique_ptr<NliBackend> MakeBackend(const BackendFlags& f) {
  if (f.kind == "fixture") {
    if (f.fixture.empty()) {
      throw Error(ErrorKind::kInvalidArgument, "--backend fixture needs --fixture");
    }
    return std::make_unique<FixtureBackend>(FixtureBackend::FromFile(f.fixture));
  }
  if (f.kind == "remote") {
    RemoteOptions opt;
    opt.endpoint = f.endpoint;
    opt.batch_size = f.remote_batch;
    opt.id = {"remote:" + f.endpoint, f.backend_version};
    return std::make_unique<RemoteBackend>(opt);
  }
  return std::make_unique<MockBackend>(std::chrono::microseconds(f.mock_cost_us));
}

struct PipelineFlags {
  std::string doc_granularity = "sentence";
  std::string sum_granularity = "sentence";
  std::string op1 = "max";
  std::string op2 = "mean";
  std::string cats = "E";
  std::string cache_dir;
};

void AddPipelineFlags(CLI::App* cmd, PipelineFlags& f, bool operators) {
  const auto granularities = CLI::IsMember({"full", "paragraph", "two_sentence", "2sent",
                                            "sentence"});
  cmd->add_option("--doc-granularity", f.doc_granularity, "document block size")
      ->check(granularities)
      ->capture_default_str();
  cmd->add_option("--sum-granularity", f.sum_granularity, "summary block size")
      ->check(CLI::IsMember({"full", "sentence"}))
      ->capture_default_str();
  if (operators) {
    cmd->add_option("--op1", f.op1, "reduction over document blocks (zs)")
        ->check(CLI::IsMember({"min", "mean", "max"}))
        ->capture_default_str();
    cmd->add_option("--op2", f.op2, "reduction over summary sentences (zs)")
        ->check(CLI::IsMember({"min", "mean", "max"}))
        ->capture_default_str();
  }
  cmd->add_option("--cats", f.cats, "NLI categories, e.g. E or E,C")->capture_default_str();
  cmd->add_option("--cache-dir", f.cache_dir,
                  "pair-matrix cache directory (default: $NLIC_CACHE_DIR, else none)");
}

MatrixRequest RequestOf(const PipelineFlags& f) {
  return {ParseGranularity(f.doc_granularity), ParseGranularity(f.sum_granularity)};
}

ZsConfig ZsConfigOf(const PipelineFlags& f) {
  return {ParseReduceOp(f.op1), ParseReduceOp(f.op2), ParseCategorySet(f.cats)};
}

std::unique_ptr<MatrixCache> MakeCache(const PipelineFlags& f) {
  std::string dir = f.cache_dir;
  if (dir.empty()) {
    if (const char* env = std::getenv("NLIC_CACHE_DIR"); env != nullptr) dir = env;
  }
  if (dir.empty()) return nullptr;
  return std::make_unique<MatrixCache>(dir);
}

// ---- score ------------------------------------------------------------------

struct ScoreFlags {
  std::string document;
  std::string summary;
  std::string mode = "zs";
  std::string model;
  BackendFlags backend;
  PipelineFlags pipeline;
};

int RunScore(const ScoreFlags& f) {
  if (f.document == "-" && f.summary == "-") {
    throw Error(ErrorKind::kInvalidArgument, "only one of --document/--summary may be stdin");
  }
  const std::string doc = ReadText(f.document);
  const std::string sum = ReadText(f.summary);
  const auto backend = MakeBackend(f.backend);
  const auto cache = MakeCache(f.pipeline);
  const MatrixRequest request = RequestOf(f.pipeline);
  ScoreBreakdown out;
  if (f.mode == "zs") {
    const ZsConfig cfg = ZsConfigOf(f.pipeline);
    out = ScoreZs(BuildOrLoad(doc, sum, request, *backend, cache.get()), cfg);
  } else {
    if (f.model.empty()) throw Error(ErrorKind::kInvalidArgument, "--mode conv needs --model");
    const ConvModel model = LoadConvModel(f.model);
    out = ConvScore(BuildOrLoad(doc, sum, request, *backend, cache.get()), model);
  }
  json j = {{"final", out.final_score}, {"per_sentence", out.per_sentence}};
  if (!out.support.empty()) {
    json support = json::array();
    for (const auto& s : out.support) support.push_back(s ? json(*s) : json(nullptr));
    j["support"] = support;
  }
  if (!out.diagnostics.empty()) j["diagnostics"] = out.diagnostics;
  std::cout << j.dump() << std::endl;
  return kExitOk;
}

// ---- train ------------------------------------------------------------------

struct TrainFlags {
  std::string train;
  std::string valid;
  std::string output;
  std::string history;
  TrainConfig cfg;
  bool raw_histograms = false;
  uint64_t seed = 0;
  BackendFlags backend;
  PipelineFlags pipeline;
};

int RunTrain(TrainFlags f) {
  const auto backend = MakeBackend(f.backend);
  const auto cache = MakeCache(f.pipeline);
  f.cfg.seed = f.seed;
  f.cfg.cats = ParseCategorySet(f.pipeline.cats);
  f.cfg.normalize_histograms = !f.raw_histograms;
  const MatrixRequest request = RequestOf(f.pipeline);
  const std::vector<LabeledPair> train_pairs = ReadTrainingCorpus(f.train);
  const std::vector<LabeledPair> valid_pairs = ReadTrainingCorpus(f.valid);
  const auto train = PrecomputeExamples(train_pairs, *backend, request, f.cfg, cache.get());
  const auto valid = PrecomputeExamples(valid_pairs, *backend, request, f.cfg, cache.get());
  const TrainResult result = Train(train, valid, f.cfg);
  SaveConvModel(result.model, f.output);
  json history = json::array();
  for (const EpochLog& e : result.history) {
    history.push_back({{"epoch", e.epoch},
                       {"train_loss", e.train_loss},
                       {"valid_balanced_accuracy", e.valid_balanced_accuracy},
                       {"valid_threshold", std::isfinite(e.valid_threshold)
                                               ? json(e.valid_threshold)
                                               : json(e.valid_threshold > 0 ? "+inf" : "-inf")}});
  }
  const json summary = {{"model", f.output},
                        {"best_epoch", result.best_epoch},
                        {"best_valid_balanced_accuracy",
                         result.history[result.best_epoch - 1].valid_balanced_accuracy},
                        {"train_examples", train.size()},
                        {"valid_examples", valid.size()},
                        {"history", history}};
  if (!f.history.empty()) WriteText(f.history, summary.dump(2) + "\n");
  std::cout << summary.dump() << std::endl;
  return kExitOk;
}

// ---- ingest -----------------------------------------------------------------

struct IngestFlags {
  std::string dataset;
  std::string input;
  std::string output;
  std::vector<std::string> polytope_accuracy_errors;
  std::vector<std::string> polytope_fluency_errors;
  bool frank_ties_consistent = false;
};

int RunIngest(const IngestFlags& f) {
  const DatasetSpec spec = LookupDatasetSpec(f.dataset);
  LabelOptions options;
  if (!f.polytope_accuracy_errors.empty()) {
    options.polytope_accuracy_errors = f.polytope_accuracy_errors;
  }
  if (!f.polytope_fluency_errors.empty()) {
    options.polytope_fluency_errors = f.polytope_fluency_errors;
  }
  options.frank_strict_majority = !f.frank_ties_consistent;
  const std::vector<json> raw = ReadJsonl(f.input);
  const IngestReport report = Ingest(spec, raw, options, [](const std::string& id) {
    std::cerr << "warning: rejected record " << id << " (empty document or summary)\n";
  });
  WriteBenchmarkJsonl(f.output, report.samples);
  const DatasetStats stats = ComputeDatasetStats(report.samples);
  std::cout << json{{"dataset", spec.name},
                    {"output", f.output},
                    {"validation", stats.validation.size},
                    {"validation_positive", stats.validation.positives},
                    {"test", stats.test.size},
                    {"test_positive", stats.test.positives},
                    {"percent_positive", stats.percent_positive},
                    {"rejected", report.rejected_ids}}
                   .dump()
            << std::endl;
  return kExitOk;
}

// ---- benchmark --------------------------------------------------------------

struct BenchmarkFlags {
  std::string input;
  std::vector<std::string> scorers = {"zs"};
  std::string reference;
  std::string report;
  std::string leaderboard;
  std::string scores;
  std::string extractor;
  std::vector<double> alphas = {0.05, 0.01};
  int n_resamples = 10000;
  int workers = 0;
  uint64_t seed = 0;
  BackendFlags backend;
  PipelineFlags pipeline;
};

std::vector<std::string> SplitWords(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

int RunBenchmark(const BenchmarkFlags& f) {
  const std::vector<BenchmarkSample> samples = ReadBenchmarkJsonl(f.input);
  const auto backend = MakeBackend(f.backend);
  const auto cache = MakeCache(f.pipeline);
  const MatrixRequest request = RequestOf(f.pipeline);
  std::unique_ptr<EntityExtractor> extractor;
  std::vector<std::unique_ptr<Scorer>> owned;
  for (const std::string& spec : f.scorers) {
    if (spec == "zs") {
      owned.push_back(std::make_unique<ZsScorer>(*backend, request, ZsConfigOf(f.pipeline),
                                                 cache.get()));
    } else if (spec.rfind("conv:", 0) == 0) {
      owned.push_back(std::make_unique<ConvScorer>(*backend, request,
                                                   LoadConvModel(spec.substr(5)),
                                                   cache.get()));
    } else if (spec == "mnli-doc") {
      owned.push_back(std::make_unique<MnliDocScorer>(*backend));
    } else if (spec == "ner-overlap") {
      if (!extractor) {
        if (f.extractor.empty()) {
          extractor = std::make_unique<CapitalizedSpanExtractor>();
        } else {
          extractor = std::make_unique<ExternalEntityExtractor>(SplitWords(f.extractor));
        }
      }
      owned.push_back(std::make_unique<NerOverlapScorer>(*extractor));
    } else {
      throw Error(ErrorKind::kInvalidArgument,
                  "unknown scorer '" + spec + "' (zs, conv:PATH, mnli-doc, ner-overlap)");
    }
  }
  std::vector<const Scorer*> scorers;
  for (const auto& s : owned) {
    for (const Scorer* other : scorers) {
      if (other->name() == s->name()) {
        throw Error(ErrorKind::kInvalidArgument, "scorer '" + s->name() + "' given twice");
      }
    }
    scorers.push_back(s.get());
  }
  EvalOptions opt;
  opt.seed = f.seed;
  opt.n_resamples = f.n_resamples;
  opt.alphas = f.alphas;
  opt.workers = f.workers;
  if (!f.reference.empty()) {
    for (size_t k = 0; k < scorers.size(); ++k) {
      if (scorers[k]->name() == f.reference) opt.reference = k;
    }
    if (!opt.reference) {
      throw Error(ErrorKind::kInvalidArgument, "reference '" + f.reference + "' is not a scorer");
    }
  }
  ScoreTable table;
  if (!f.scores.empty()) table = ScoreTable::Load(f.scores);
  const EvalReport report = Evaluate(scorers, samples, opt, &table);
  if (!f.scores.empty()) table.Save(f.scores);
  const std::string board = Leaderboard(report);
  if (!f.report.empty()) WriteText(f.report, ReportToJson(report).dump(2) + "\n");
  if (!f.leaderboard.empty()) WriteText(f.leaderboard, board);
  std::cout << board;
  return kExitOk;
}

// ---- throughput -------------------------------------------------------------

struct ThroughputFlags {
  std::string input;
  size_t synthetic_docs = 100;
  size_t doc_sentences = 20;
  std::string mode = "zs";
  std::string model;
  size_t warmup = 10;
  int runs = 1;
  int workers = 0;
  uint64_t seed = 0;
  BackendFlags backend;
  PipelineFlags pipeline;
};

int RunThroughput(const ThroughputFlags& f) {
  const auto load_start = std::chrono::steady_clock::now();
  const auto backend = MakeBackend(f.backend);
  const auto cache = MakeCache(f.pipeline);
  std::unique_ptr<Scorer> scorer;
  if (f.mode == "zs") {
    scorer = std::make_unique<ZsScorer>(*backend, RequestOf(f.pipeline),
                                        ZsConfigOf(f.pipeline), cache.get());
  } else {
    if (f.model.empty()) throw Error(ErrorKind::kInvalidArgument, "--mode conv needs --model");
    scorer = std::make_unique<ConvScorer>(*backend, RequestOf(f.pipeline),
                                          LoadConvModel(f.model), cache.get());
  }
  const double load_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - load_start).count();
  const std::vector<LabeledPair> corpus =
      f.input.empty() ? MakeSyntheticDocuments(f.synthetic_docs, f.doc_sentences, f.seed)
                      : ReadTrainingCorpus(f.input);
  const std::vector<ScoringItem> items = ItemsOf(corpus);
  json runs = json::array();
  double sum = 0.0, sum_sq = 0.0;
  for (int r = 0; r < f.runs; ++r) {
    const ThroughputReport rep =
        MeasureThroughput(*scorer, items, f.warmup, f.workers, load_seconds);
    runs.push_back(ThroughputToJson(rep));
    sum += rep.docs_per_min;
    sum_sq += rep.docs_per_min * rep.docs_per_min;
  }
  const double mean = sum / f.runs;
  const double var = f.runs > 1 ? std::max(0.0, (sum_sq - f.runs * mean * mean) / (f.runs - 1))
                                : 0.0;
  std::cout << json{{"docs_per_min", mean},
                    {"coefficient_of_variation", mean > 0 ? std::sqrt(var) / mean : 0.0},
                    {"load_seconds", load_seconds},
                    {"runs", runs}}
                   .dump()
            << std::endl;
  return kExitOk;
}

// ---- synth ------------------------------------------------------------------

struct SynthFlags {
  std::string kind = "separable";
  size_t n = 2000;
  std::string output;
  std::vector<std::string> datasets = {"synth-a", "synth-b"};
  uint64_t seed = 0;
};

int RunSynth(const SynthFlags& f) {
  if (f.kind == "separable") {
    WriteTrainingCorpus(f.output, MakeSeparableCorpus(f.n, f.seed));
  } else if (f.kind == "documents") {
    WriteTrainingCorpus(f.output, MakeSyntheticDocuments(f.n, 20, f.seed));
  } else {
    WriteBenchmarkJsonl(f.output, MakeSyntheticBenchmark(f.datasets, f.n, f.seed));
  }
  std::cout << json{{"output", f.output}, {"kind", f.kind}, {"n", f.n}}.dump() << std::endl;
  return kExitOk;
}

// ---- config injection -------------------------------------------------------

// Turns the --config JSON object into flags for `cmd`. Unknown keys throw.
std::vector<std::string> ConfigArgs(const CLI::App* cmd, const std::string& path) {
  json cfg;
  try {
    cfg = json::parse(ReadText(path));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kInvalidArgument, "config " + path + ": " + e.what());
  }
  if (!cfg.is_object()) throw Error(ErrorKind::kInvalidArgument, "config must be an object");
  std::vector<std::string> out;
  for (const auto& [key, value] : cfg.items()) {
    const CLI::Option* opt = key == "config" || key == "help"
                                 ? nullptr
                                 : cmd->get_option_no_throw("--" + key);
    if (opt == nullptr) {
      throw Error(ErrorKind::kInvalidArgument,
                  "unknown config key '" + key + "' for command " + cmd->get_name());
    }
    const std::string flag = "--" + key;
    auto scalar = [&](const json& v) -> std::string {
      if (v.is_string()) return v.get<std::string>();
      if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
      if (v.is_number()) return v.dump();
      throw Error(ErrorKind::kInvalidArgument, "config key '" + key + "' has a bad value");
    };
    if (value.is_array()) {
      for (const json& v : value) {
        out.push_back(flag);
        out.push_back(scalar(v));
      }
    } else if (opt->get_type_size() == 0) {
      out.push_back(flag + "=" + scalar(value));
    } else {
      out.push_back(flag);
      out.push_back(scalar(value));
    }
  }
  return out;
}

int Main(int argc, char** argv) {
  CLI::App app{"nlic: NLI-based factual consistency scoring for summaries"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.footer("Every long flag of a command is also a key of its --config JSON file.");
  std::string config_path;
  auto add_config = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "JSON file of flag values (flags win)");
  };

  ScoreFlags score;
  CLI::App* score_cmd = app.add_subcommand("score", "score one document/summary pair");
  score_cmd->add_option("--document", score.document, "document file, - for stdin")->required();
  score_cmd->add_option("--summary", score.summary, "summary file, - for stdin")->required();
  score_cmd->add_option("--mode", score.mode, "aggregator")
      ->check(CLI::IsMember({"zs", "conv"}))
      ->capture_default_str();
  score_cmd->add_option("--model", score.model, "ConvModel JSON (mode conv)");
  AddBackendFlags(score_cmd, score.backend);
  AddPipelineFlags(score_cmd, score.pipeline, true);
  add_config(score_cmd);

  TrainFlags train;
  CLI::App* train_cmd = app.add_subcommand("train", "train a ConvModel");
  train_cmd->add_option("--train", train.train, "training JSONL {id,document,summary|claim,label}")
      ->required();
  train_cmd->add_option("--valid", train.valid, "validation JSONL")->required();
  train_cmd->add_option("--output", train.output, "model file to write")->required();
  train_cmd->add_option("--history", train.history, "write the epoch log here");
  train_cmd->add_option("--bins", train.cfg.h, "histogram bins")->check(CLI::Range(2, 100000))
      ->capture_default_str();
  train_cmd->add_option("--batch-size", train.cfg.batch_size, "minibatch size")
      ->check(CLI::PositiveNumber)->capture_default_str();
  train_cmd->add_option("--learning-rate", train.cfg.adam.learning_rate, "Adam step size")
      ->check(CLI::PositiveNumber)->capture_default_str();
  train_cmd->add_option("--max-epochs", train.cfg.max_epochs, "epoch limit")
      ->check(CLI::PositiveNumber)->capture_default_str();
  train_cmd->add_option("--patience", train.cfg.patience,
                        "stop after this many epochs without improvement")
      ->check(CLI::PositiveNumber)->capture_default_str();
  train_cmd->add_option("--subsample", train.cfg.subsample_size, "training subsample size")
      ->check(CLI::PositiveNumber)->capture_default_str();
  train_cmd->add_flag("--raw-histograms", train.raw_histograms,
                      "use raw bin counts instead of dividing by block count");
  train_cmd->add_option("--seed", train.seed, "seed for subsampling and shuffling")
      ->capture_default_str();
  AddBackendFlags(train_cmd, train.backend);
  AddPipelineFlags(train_cmd, train.pipeline, false);
  add_config(train_cmd);

  IngestFlags ingest;
  CLI::App* ingest_cmd = app.add_subcommand("ingest", "standardize a raw dataset");
  ingest_cmd->add_option("--dataset", ingest.dataset,
                         "cogensumm, xsumfaith, polytope, factcc, summeval, frank, passthrough")
      ->required();
  ingest_cmd->add_option("--input", ingest.input,
                         "raw JSONL {id,document,summary,annotation[,split]}")
      ->required();
  ingest_cmd->add_option("--output", ingest.output, "benchmark JSONL to write")->required();
  ingest_cmd->add_option("--polytope-accuracy-errors", ingest.polytope_accuracy_errors,
                         "error names that make a Polytope summary inconsistent");
  ingest_cmd->add_option("--polytope-fluency-errors", ingest.polytope_fluency_errors,
                         "error names ignored by the Polytope rule");
  ingest_cmd->add_flag("--frank-ties-consistent", ingest.frank_ties_consistent,
                       "count FRANK annotator ties as consistent");
  add_config(ingest_cmd);

  BenchmarkFlags bench;
  CLI::App* bench_cmd = app.add_subcommand("benchmark", "evaluate scorers on a benchmark");
  bench_cmd->add_option("--input", bench.input, "benchmark JSONL")->required();
  bench_cmd->add_option("--scorer", bench.scorers,
                        "zs, conv:MODEL_PATH, mnli-doc or ner-overlap (repeatable)")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll)
      ->capture_default_str();
  bench_cmd->add_option("--reference", bench.reference,
                        "scorer name the others are tested against");
  bench_cmd->add_option("--report", bench.report, "EvalReport JSON output");
  bench_cmd->add_option("--leaderboard", bench.leaderboard, "leaderboard text output");
  bench_cmd->add_option("--scores", bench.scores, "persistent score table (incremental)");
  bench_cmd->add_option("--extractor", bench.extractor,
                        "external NER command for ner-overlap (default: rule-based)");
  bench_cmd->add_option("--alpha", bench.alphas, "significance levels")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll)
      ->capture_default_str();
  bench_cmd->add_option("--n-resamples", bench.n_resamples, "bootstrap resamples")
      ->check(CLI::Range(1000, 100000000))->capture_default_str();
  bench_cmd->add_option("--workers", bench.workers, "scoring threads, 0 = all cores")
      ->check(CLI::NonNegativeNumber)->capture_default_str();
  bench_cmd->add_option("--seed", bench.seed, "bootstrap seed")->capture_default_str();
  AddBackendFlags(bench_cmd, bench.backend);
  AddPipelineFlags(bench_cmd, bench.pipeline, true);
  add_config(bench_cmd);

  ThroughputFlags tp;
  CLI::App* tp_cmd = app.add_subcommand("throughput", "measure documents per minute");
  tp_cmd->add_option("--input", tp.input, "corpus JSONL (default: synthetic documents)");
  tp_cmd->add_option("--synthetic-docs", tp.synthetic_docs, "synthetic corpus size")
      ->check(CLI::PositiveNumber)->capture_default_str();
  tp_cmd->add_option("--doc-sentences", tp.doc_sentences, "sentences per synthetic document")
      ->check(CLI::PositiveNumber)->capture_default_str();
  tp_cmd->add_option("--mode", tp.mode, "aggregator")
      ->check(CLI::IsMember({"zs", "conv"}))->capture_default_str();
  tp_cmd->add_option("--model", tp.model, "ConvModel JSON (mode conv)");
  tp_cmd->add_option("--warmup", tp.warmup, "untimed warmup documents")->capture_default_str();
  tp_cmd->add_option("--runs", tp.runs, "timed passes")
      ->check(CLI::PositiveNumber)->capture_default_str();
  tp_cmd->add_option("--workers", tp.workers, "scoring threads, 0 = all cores")
      ->check(CLI::NonNegativeNumber)->capture_default_str();
  tp_cmd->add_option("--seed", tp.seed, "synthetic corpus seed")->capture_default_str();
  AddBackendFlags(tp_cmd, tp.backend);
  AddPipelineFlags(tp_cmd, tp.pipeline, true);
  add_config(tp_cmd);

  SynthFlags synth;
  CLI::App* synth_cmd = app.add_subcommand("synth", "write a synthetic corpus");
  synth_cmd->add_option("--kind", synth.kind, "corpus kind")
      ->check(CLI::IsMember({"separable", "documents", "benchmark"}))
      ->capture_default_str();
  synth_cmd->add_option("--n", synth.n, "records (per dataset for benchmark)")
      ->check(CLI::PositiveNumber)->capture_default_str();
  synth_cmd->add_option("--output", synth.output, "JSONL to write")->required();
  synth_cmd->add_option("--datasets", synth.datasets, "dataset names (benchmark)")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll)
      ->capture_default_str();
  synth_cmd->add_option("--seed", synth.seed, "generator seed")->capture_default_str();
  add_config(synth_cmd);

  // Find the command and its --config before the real parse.
  std::vector<std::string> args(argv + 1, argv + argc);
  std::vector<std::string> injected;
  if (!args.empty()) {
    CLI::App* cmd = nullptr;
    for (CLI::App* sub : app.get_subcommands({})) {
      if (sub->get_name() == args[0]) cmd = sub;
    }
    if (cmd != nullptr) {
      for (size_t k = 1; k < args.size(); ++k) {
        if (args[k] == "--config" && k + 1 < args.size()) {
          injected = ConfigArgs(cmd, args[k + 1]);
        } else if (args[k].rfind("--config=", 0) == 0) {
          injected = ConfigArgs(cmd, args[k].substr(9));
        }
      }
    }
  }
  if (!injected.empty()) args.insert(args.begin() + 1, injected.begin(), injected.end());
  std::vector<char*> full = {argv[0]};
  for (std::string& a : args) full.push_back(a.data());

  try {
    app.parse(static_cast<int>(full.size()), full.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return ReportError("InvalidArgument", e.what(), kExitInput);
  }

  if (score_cmd->parsed()) return RunScore(score);
  if (train_cmd->parsed()) return RunTrain(train);
  if (ingest_cmd->parsed()) return RunIngest(ingest);
  if (bench_cmd->parsed()) return RunBenchmark(bench);
  if (tp_cmd->parsed()) return RunThroughput(tp);
  if (synth_cmd->parsed()) return RunSynth(synth);
  return kExitInput;
}

}  // namespace
}  // namespace nlic

int main(int argc, char** argv) {
  try {
    return nlic::Main(argc, argv);
  } catch (const nlic::Error& e) {
    return nlic::ReportError(nlic::ErrorKindName(e.kind()), e.what(),
                             nlic::ExitCodeFor(e.kind()));
  } catch (const std::exception& e) {
    return nlic::ReportError("Internal", e.what(), 1);
  }
}
