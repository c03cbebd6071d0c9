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

#ifndef NLIC_DATASETS_H_
#define NLIC_DATASETS_H_

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

namespace nlic {

enum class Split { kValidation, kTest };

std::string_view SplitName(Split s);
Split ParseSplit(std::string_view name);

// Label 1 = consistent.
struct BenchmarkSample {
  std::string id;
  std::string document;
  std::string summary;
  int label = 0;
  std::string dataset;
  Split split = Split::kValidation;
  std::optional<nlohmann::json> annotations;

  friend bool operator==(const BenchmarkSample&, const BenchmarkSample&) = default;
};

enum class MappingRule {
  kCoGenSumm,
  kXSumFaith,
  kPolytope,
  kFactCC,
  kSummEval,
  kFrank,
  kPassThrough,
};

std::string_view MappingRuleName(MappingRule rule);

struct DatasetSpec {
  std::string name;
  MappingRule rule = MappingRule::kPassThrough;
  bool has_official_split = false;
};

// Built-in specs: cogensumm, xsumfaith, polytope, factcc, summeval, frank,
// passthrough (official split taken from the raw records).
DatasetSpec LookupDatasetSpec(std::string_view name);

struct LabelOptions {
  // Polytope error names that make a summary inconsistent; any other name in
  // `polytope_fluency_errors` is ignored, anything else is a schema error.
  std::vector<std::string> polytope_accuracy_errors = {
      "Addition", "Omission", "Inaccuracy Intrinsic", "Inaccuracy Extrinsic",
      "Positive-Negative Aspect"};
  std::vector<std::string> polytope_fluency_errors = {"Duplication", "Word Form",
                                                      "Word Order"};
  // FRANK: consistent iff no-error votes * 2 > annotators (strict majority);
  // when false, ties count as consistent.
  bool frank_strict_majority = true;
};

// Raw annotation schemas, one per rule:
//   CoGenSumm   {"correct": bool}
//   XSumFaith   {"hallucinations": ["intrinsic"|"extrinsic", ...]}
//   Polytope    {"errors": ["<error name>", ...]}
//   FactCC      {"label": "CORRECT"|"INCORRECT"}
//   SummEval    {"consistency": [1..5, ...]}  one score per annotator
//   FRANK       {"no_error": [bool, ...]}     one vote per annotator
//   PassThrough {"label": 0|1}
// Throws kSchemaMismatch when the annotation does not match.
int MapLabel(MappingRule rule, const nlohmann::json& annotation,
             const LabelOptions& options = {});

// Even positions -> validation, odd -> test, order preserved.
template <typename T>
std::pair<std::vector<T>, std::vector<T>> SplitEvenOdd(std::span<const T> items) {
  std::pair<std::vector<T>, std::vector<T>> out;
  for (size_t i = 0; i < items.size(); ++i) {
    (i % 2 == 0 ? out.first : out.second).push_back(items[i]);
  }
  return out;
}

// A raw record: {"id","document","summary","annotation":{...}} plus "split"
// for datasets with an official split.
struct IngestReport {
  std::vector<BenchmarkSample> samples;
  std::vector<std::string> rejected_ids;
};

// Records with an empty document or summary are rejected (id kept in the
// report and passed to `on_reject`); label mapping errors propagate.
IngestReport Ingest(const DatasetSpec& spec, std::span<const nlohmann::json> raw,
                    const LabelOptions& options = {},
                    const std::function<void(const std::string&)>& on_reject = {});

struct SplitStats {
  size_t size = 0;
  size_t positives = 0;
};

struct DatasetStats {
  SplitStats validation;
  SplitStats test;
  double percent_positive = 0.0;  // over validation + test
};

DatasetStats ComputeDatasetStats(std::span<const BenchmarkSample> samples);

// Canonical JSONL: {"id","dataset","split","document","summary","label"}.
std::string SampleToJsonLine(const BenchmarkSample& s);
BenchmarkSample SampleFromJson(const nlohmann::json& j);
std::vector<BenchmarkSample> ReadBenchmarkJsonl(const std::string& path);
void WriteBenchmarkJsonl(const std::string& path,
                         std::span<const BenchmarkSample> samples);

std::vector<nlohmann::json> ReadJsonl(const std::string& path);

// Training corpus record: {"id","document","summary"|"claim","label"}.
struct LabeledPair {
  std::string id;
  std::string document;
  std::string summary;
  int label = 0;
};

LabeledPair LabeledPairFromJson(const nlohmann::json& j);
std::vector<LabeledPair> ReadTrainingCorpus(const std::string& path);
void WriteTrainingCorpus(const std::string& path, std::span<const LabeledPair> pairs);

}  // namespace nlic

#endif  // NLIC_DATASETS_H_
