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

#include "nlic/datasets.h"

#include <gtest/gtest.h>

#include <random>
#include <set>

#include "test_util.h"

namespace nlic {
namespace {

using nlohmann::json;
using testing::KindOf;

TEST(MapLabelTest, SummEval) {
  EXPECT_EQ(MapLabel(MappingRule::kSummEval, json{{"consistency", {5, 5, 5}}}), 1);
  EXPECT_EQ(MapLabel(MappingRule::kSummEval, json{{"consistency", {5, 5, 4}}}), 0);
  EXPECT_EQ(KindOf([] { MapLabel(MappingRule::kSummEval, json{{"consistency", {6}}}); }),
            ErrorKind::kSchemaMismatch);
}

TEST(MapLabelTest, Frank) {
  EXPECT_EQ(MapLabel(MappingRule::kFrank, json{{"no_error", {true, true, false}}}), 1);
  EXPECT_EQ(MapLabel(MappingRule::kFrank, json{{"no_error", {true, false, false}}}), 0);
  const json tie = {{"no_error", {true, false}}};
  EXPECT_EQ(MapLabel(MappingRule::kFrank, tie), 0);
  LabelOptions lenient;
  lenient.frank_strict_majority = false;
  EXPECT_EQ(MapLabel(MappingRule::kFrank, tie, lenient), 1);
}

TEST(MapLabelTest, Polytope) {
  EXPECT_EQ(MapLabel(MappingRule::kPolytope, json{{"errors", {"Duplication", "Word Order"}}}), 1);
  EXPECT_EQ(MapLabel(MappingRule::kPolytope, json{{"errors", json::array()}}), 1);
  EXPECT_EQ(MapLabel(MappingRule::kPolytope, json{{"errors", {"Word Form", "Omission"}}}), 0);
  EXPECT_EQ(KindOf([] { MapLabel(MappingRule::kPolytope, json{{"errors", {"Typo"}}}); }),
            ErrorKind::kSchemaMismatch);
  LabelOptions custom;
  custom.polytope_accuracy_errors = {"Typo"};
  EXPECT_EQ(MapLabel(MappingRule::kPolytope, json{{"errors", {"Typo"}}}, custom), 0);
}

TEST(MapLabelTest, OtherRules) {
  EXPECT_EQ(MapLabel(MappingRule::kCoGenSumm, json{{"correct", true}}), 1);
  EXPECT_EQ(MapLabel(MappingRule::kCoGenSumm, json{{"correct", false}}), 0);
  EXPECT_EQ(MapLabel(MappingRule::kXSumFaith, json{{"hallucinations", json::array()}}), 1);
  EXPECT_EQ(MapLabel(MappingRule::kXSumFaith, json{{"hallucinations", {"intrinsic"}}}), 0);
  EXPECT_EQ(MapLabel(MappingRule::kXSumFaith, json{{"hallucinations", {"extrinsic"}}}), 0);
  EXPECT_EQ(MapLabel(MappingRule::kFactCC, json{{"label", "CORRECT"}}), 1);
  EXPECT_EQ(MapLabel(MappingRule::kFactCC, json{{"label", "INCORRECT"}}), 0);
  EXPECT_EQ(MapLabel(MappingRule::kPassThrough, json{{"label", 1}}), 1);
}

TEST(MapLabelTest, TotalityOverMalformedRecords) {
  const std::vector<std::pair<MappingRule, json>> bad = {
      {MappingRule::kCoGenSumm, json{{"correct", "yes"}}},
      {MappingRule::kCoGenSumm, json::array()},
      {MappingRule::kXSumFaith, json{{"hallucinations", {3}}}},
      {MappingRule::kFactCC, json{{"label", 1}}},
      {MappingRule::kFactCC, json{{"label", "MAYBE"}}},
      {MappingRule::kSummEval, json{{"consistency", json::array()}}},
      {MappingRule::kFrank, json{{"no_error", {1, 0}}}},
      {MappingRule::kPassThrough, json{{"label", 2}}},
      {MappingRule::kPassThrough, json::object()},
  };
  for (const auto& [rule, annotation] : bad) {
    EXPECT_EQ(KindOf([&] { MapLabel(rule, annotation); }), ErrorKind::kSchemaMismatch)
        << MappingRuleName(rule) << " " << annotation.dump();
  }
}

TEST(SplitEvenOddTest, Examples) {
  const std::vector<int> six = {0, 1, 2, 3, 4, 5};
  const auto [valid, test] = SplitEvenOdd<int>(six);
  EXPECT_EQ(valid, (std::vector<int>{0, 2, 4}));
  EXPECT_EQ(test, (std::vector<int>{1, 3, 5}));
  const std::vector<int> one = {7};
  const auto [v1, t1] = SplitEvenOdd<int>(one);
  EXPECT_EQ(v1, std::vector<int>{7});
  EXPECT_TRUE(t1.empty());
}

TEST(SplitEvenOddTest, ClassBalanceIsPreserved) {
  for (uint64_t seed = 0; seed < 10; ++seed) {
    std::mt19937_64 rng(seed);
    const double p = 0.1 + 0.08 * static_cast<double>(seed);
    std::bernoulli_distribution coin(p);
    std::vector<int> labels(1000);
    for (int& l : labels) l = coin(rng) ? 1 : 0;
    const auto [valid, test] = SplitEvenOdd<int>(labels);
    const auto rate = [](const std::vector<int>& v) {
      return 100.0 * std::count(v.begin(), v.end(), 1) / static_cast<double>(v.size());
    };
    EXPECT_NEAR(rate(valid), rate(labels), 5.0) << "seed " << seed;
    EXPECT_NEAR(rate(test), rate(labels), 5.0) << "seed " << seed;
  }
}

json RawRecord(const std::string& id, const json& annotation, const std::string& doc = "A doc.",
               const std::string& sum = "A sum.") {
  return json{{"id", id}, {"document", doc}, {"summary", sum}, {"annotation", annotation}};
}

TEST(IngestTest, EvenOddByPublishedPosition) {
  std::vector<json> raw;
  for (int k = 0; k < 7; ++k) {
    raw.push_back(RawRecord("s" + std::to_string(k), json{{"consistency", {5, k % 2 ? 4 : 5, 5}}},
                            "Doc " + std::to_string(k) + ".", k == 2 ? "  " : "Sum."));
  }
  std::vector<std::string> logged;
  const IngestReport report = Ingest(LookupDatasetSpec("SummEval"), raw, {},
                                     [&](const std::string& id) { logged.push_back(id); });
  EXPECT_EQ(report.rejected_ids, std::vector<std::string>{"s2"});
  EXPECT_EQ(logged, report.rejected_ids);
  ASSERT_EQ(report.samples.size(), 6u);
  std::set<std::string> ids;
  for (const auto& s : report.samples) {
    const int index = std::stoi(s.id.substr(1));
    EXPECT_EQ(s.split, index % 2 == 0 ? Split::kValidation : Split::kTest) << s.id;
    EXPECT_EQ(s.label, index % 2 == 0 ? 1 : 0);
    EXPECT_EQ(s.dataset, "summeval");
    EXPECT_TRUE(ids.insert(s.id).second);
  }
}

TEST(IngestTest, OfficialSplitRequired) {
  json rec = RawRecord("f1", json{{"label", "CORRECT"}});
  rec["split"] = "test";
  std::vector<json> raw = {rec};
  const IngestReport report = Ingest(LookupDatasetSpec("factcc"), raw);
  ASSERT_EQ(report.samples.size(), 1u);
  EXPECT_EQ(report.samples[0].split, Split::kTest);
  raw[0].erase("split");
  EXPECT_EQ(KindOf([&] { Ingest(LookupDatasetSpec("factcc"), raw); }),
            ErrorKind::kSchemaMismatch);
  EXPECT_EQ(KindOf([] { LookupDatasetSpec("cnn"); }), ErrorKind::kInvalidArgument);
}

TEST(IngestTest, SplitsAreDisjointAndCover) {
  std::vector<json> raw;
  for (int k = 0; k < 101; ++k) {
    raw.push_back(RawRecord("x" + std::to_string(k), json{{"hallucinations", json::array()}}));
  }
  const IngestReport report = Ingest(LookupDatasetSpec("xsumfaith"), raw);
  std::set<std::string> valid, test;
  for (const auto& s : report.samples) (s.split == Split::kValidation ? valid : test).insert(s.id);
  EXPECT_EQ(valid.size() + test.size(), 101u);
  for (const auto& id : valid) EXPECT_EQ(test.count(id), 0u);
  EXPECT_EQ(valid.size(), 51u);
}

TEST(DatasetStatsTest, Examples) {
  std::vector<BenchmarkSample> samples(4);
  for (size_t k = 0; k < 4; ++k) {
    samples[k].label = k == 0 ? 0 : 1;
    samples[k].split = k < 2 ? Split::kValidation : Split::kTest;
  }
  DatasetStats stats = ComputeDatasetStats(samples);
  EXPECT_DOUBLE_EQ(stats.percent_positive, 75.0);
  EXPECT_EQ(stats.validation.size, 2u);
  EXPECT_EQ(stats.validation.positives, 1u);
  EXPECT_EQ(stats.test.positives, 2u);
  samples[0].label = 1;
  EXPECT_DOUBLE_EQ(ComputeDatasetStats(samples).percent_positive, 100.0);
}

TEST(JsonlTest, RoundTripIsIdentical) {
  std::vector<BenchmarkSample> samples;
  for (int k = 0; k < 5; ++k) {
    BenchmarkSample s;
    s.id = "id-" + std::to_string(k);
    s.document = "Line one.\nLine \"two\" \xc3\xa9t\xc3\xa9.";
    s.summary = "Summary " + std::to_string(k) + ".";
    s.label = k % 2;
    s.dataset = k < 3 ? "frank" : "polytope";
    s.split = k % 2 ? Split::kTest : Split::kValidation;
    if (k == 1) s.annotations = json{{"no_error", {true, false, true}}};
    samples.push_back(s);
  }
  testing::TempDir dir;
  WriteBenchmarkJsonl(dir.File("b.jsonl"), samples);
  EXPECT_EQ(ReadBenchmarkJsonl(dir.File("b.jsonl")), samples);
  const json line = json::parse(SampleToJsonLine(samples[0]));
  EXPECT_EQ(line["split"], "validation");
  EXPECT_EQ(line["label"], 0);
}

TEST(JsonlTest, RejectsBadLabels) {
  json j = {{"id", "a"}, {"dataset", "d"}, {"split", "test"},
            {"document", "D."}, {"summary", "S."}, {"label", 3}};
  EXPECT_EQ(KindOf([&] { SampleFromJson(j); }), ErrorKind::kSchemaMismatch);
  j["label"] = 1;
  j["split"] = "train";
  EXPECT_EQ(KindOf([&] { SampleFromJson(j); }), ErrorKind::kSchemaMismatch);
}

TEST(TrainingCorpusTest, SummaryOrClaim) {
  EXPECT_EQ(LabeledPairFromJson(json{{"id", "a"}, {"document", "D."}, {"claim", "C."},
                                     {"label", 1}}).summary, "C.");
  std::vector<LabeledPair> pairs = {{"a", "Doc.", "Sum.", 1}, {"b", "Doc2.", "Sum2.", 0}};
  testing::TempDir dir;
  WriteTrainingCorpus(dir.File("t.jsonl"), pairs);
  const auto back = ReadTrainingCorpus(dir.File("t.jsonl"));
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[1].summary, "Sum2.");
  EXPECT_EQ(back[1].label, 0);
  EXPECT_EQ(KindOf([] { ReadJsonl("/nonexistent/file.jsonl"); }), ErrorKind::kIo);
}

}  // namespace
}  // namespace nlic
