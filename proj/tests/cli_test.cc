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

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "nlic/datasets.h"
#include "nlic/synthetic.h"
#include "test_util.h"

namespace nlic {
namespace {

using nlohmann::json;
using testing::DataPath;
using testing::ReadFile;

struct RunResult {
  int code = -1;
  std::string out;
  std::string err;
};

class CliTest : public ::testing::Test {
 protected:
  RunResult Run(const std::string& args, const std::string& env = "") {
    const std::string out = dir_.File("stdout");
    const std::string err = dir_.File("stderr");
    const std::string cmd = env + " " + NLIC_CLI + " " + args + " >" + out + " 2>" + err;
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = ReadFile(out);
    r.err = ReadFile(err);
    return r;
  }
  std::string Write(const std::string& name, const std::string& text) {
    std::ofstream(dir_.File(name)) << text;
    return dir_.File(name);
  }
  std::string WorkedExampleArgs() const {
    return "--document " + DataPath("example_document.txt") + " --summary " +
           DataPath("example_summary.txt") + " --backend fixture --fixture " +
           DataPath("example_fixture.json");
  }

  testing::TempDir dir_;
};

TEST_F(CliTest, ScoreWorkedExample) {
  const RunResult r = Run("score --mode zs " + WorkedExampleArgs());
  ASSERT_EQ(r.code, 0) << r.err;
  const json out = json::parse(r.out);
  EXPECT_NEAR(out["final"].get<double>(), 0.67, 1e-6);
  EXPECT_EQ(out["support"], json({1, 2, 0}));
  const RunResult mm = Run("score --mode zs --op1 max --op2 max " + WorkedExampleArgs());
  EXPECT_NEAR(json::parse(mm.out)["final"].get<double>(), 0.99, 1e-12);
}

TEST_F(CliTest, ScoreFromStdin) {
  const RunResult r = Run("score --document - --summary " + DataPath("example_summary.txt") +
                          " --backend fixture --fixture " + DataPath("example_fixture.json") +
                          " < " + DataPath("example_document.txt"));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(json::parse(r.out)["final"].get<double>(), 0.67, 1e-6);
}

TEST_F(CliTest, ConfigFileWithFlagOverride) {
  const std::string cfg = Write("cfg.json", json{{"backend", "fixture"},
                                                 {"fixture", DataPath("example_fixture.json")},
                                                 {"op2", "max"}}.dump());
  const std::string io = " --document " + DataPath("example_document.txt") + " --summary " +
                         DataPath("example_summary.txt");
  const RunResult from_file = Run("score --config " + cfg + io);
  ASSERT_EQ(from_file.code, 0) << from_file.err;
  EXPECT_NEAR(json::parse(from_file.out)["final"].get<double>(), 0.99, 1e-12);
  const RunResult overridden = Run("score --op2 mean --config " + cfg + io);
  EXPECT_NEAR(json::parse(overridden.out)["final"].get<double>(), 0.67, 1e-6);
  const std::string bad = Write("bad.json", R"({"fixture_path": "x"})");
  const RunResult unknown = Run("score --config " + bad + io);
  EXPECT_EQ(unknown.code, 2);
  EXPECT_EQ(json::parse(unknown.err)["error"], "InvalidArgument");
}

TEST_F(CliTest, ExitCodes) {
  const std::string empty = Write("empty.txt", "   \n");
  const RunResult r = Run("score --document " + DataPath("example_document.txt") +
                          " --summary " + empty);
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(json::parse(r.err)["error"], "EmptyInput");
  const RunResult remote = Run("score " + std::string("--document ") +
                               DataPath("example_document.txt") + " --summary " +
                               DataPath("example_summary.txt") +
                               " --backend remote --endpoint http://127.0.0.1:1");
  EXPECT_EQ(remote.code, 3);
  EXPECT_EQ(json::parse(remote.err)["error"], "BackendUnavailable");
  const std::string other = Write("other.txt", "Nothing in the fixture.");
  EXPECT_EQ(Run("score --document " + DataPath("example_document.txt") + " --summary " + other +
                " --backend fixture --fixture " + DataPath("example_fixture.json")).code, 3);
  EXPECT_EQ(Run("score --document x").code, 2);
  EXPECT_EQ(Run("score --op1 median " + WorkedExampleArgs()).code, 2);
}

TEST_F(CliTest, HelpListsEveryKey) {
  const std::map<std::string, std::vector<std::string>> keys = {
      {"score", {"--document", "--summary", "--mode", "--model", "--backend", "--fixture",
                 "--endpoint", "--op1", "--op2", "--cats", "--doc-granularity",
                 "--sum-granularity", "--cache-dir", "--config"}},
      {"train", {"--train", "--valid", "--output", "--bins", "--batch-size",
                 "--learning-rate", "--max-epochs", "--patience", "--subsample", "--seed",
                 "--raw-histograms"}},
      {"ingest", {"--dataset", "--input", "--output", "--polytope-accuracy-errors",
                  "--frank-ties-consistent"}},
      {"benchmark", {"--input", "--scorer", "--reference", "--report", "--leaderboard",
                     "--scores", "--alpha", "--n-resamples", "--seed", "--workers"}},
      {"throughput", {"--input", "--synthetic-docs", "--warmup", "--runs", "--mode"}},
  };
  for (const auto& [cmd, flags] : keys) {
    const RunResult r = Run(cmd + " --help");
    EXPECT_EQ(r.code, 0) << cmd;
    for (const std::string& flag : flags) {
      EXPECT_NE(r.out.find(flag), std::string::npos) << cmd << " " << flag;
    }
  }
}

TEST_F(CliTest, IngestSixRecords) {
  std::string raw;
  for (int k = 0; k < 6; ++k) {
    raw += json{{"id", "r" + std::to_string(k)},
                {"document", "Doc " + std::to_string(k) + "."},
                {"summary", "Sum."},
                {"annotation", {{"consistency", {5, 5, k % 3 ? 5 : 3}}}}}
               .dump() +
           "\n";
  }
  const std::string in = Write("raw.jsonl", raw);
  const std::string out = dir_.File("bench.jsonl");
  const RunResult r = Run("ingest --dataset summeval --input " + in + " --output " + out);
  ASSERT_EQ(r.code, 0) << r.err;
  const auto samples = ReadBenchmarkJsonl(out);
  ASSERT_EQ(samples.size(), 6u);
  int valid = 0;
  for (const auto& s : samples) valid += s.split == Split::kValidation;
  EXPECT_EQ(valid, 3);
  EXPECT_EQ(json::parse(r.out)["test"], 3);

  const std::string broken = Write("broken.jsonl", R"({"id":"x","document":"D.","summary":"S.","annotation":{"consistency":"high"}})");
  EXPECT_EQ(Run("ingest --dataset summeval --input " + broken + " --output " + out).code, 4);
}

TEST_F(CliTest, TrainThenBenchmark) {
  const std::string train = dir_.File("train.jsonl");
  const std::string valid = dir_.File("valid.jsonl");
  const std::string model = dir_.File("model.json");
  WriteTrainingCorpus(train, MakeSeparableCorpus(600, 1, "tr"));
  WriteTrainingCorpus(valid, MakeSeparableCorpus(200, 2, "va"));
  const RunResult t = Run("train --train " + train + " --valid " + valid + " --output " +
                          model + " --seed 4");
  ASSERT_EQ(t.code, 0) << t.err;
  EXPECT_GE(json::parse(t.out)["best_valid_balanced_accuracy"].get<double>(), 0.95);
  const std::string first = ReadFile(model);
  ASSERT_EQ(Run("train --train " + train + " --valid " + valid + " --output " + model +
                " --seed 4").code, 0);
  EXPECT_EQ(ReadFile(model), first);

  const std::string bench = dir_.File("bench.jsonl");
  WriteBenchmarkJsonl(bench, MakeSyntheticBenchmark({"one", "two"}, 120, 3));
  const std::string report = dir_.File("report.json");
  const std::string board = dir_.File("board.txt");
  const RunResult b = Run("benchmark --input " + bench + " --scorer conv:" + model +
                          " --scorer ner-overlap --reference ner-overlap --n-resamples 1000" +
                          " --report " + report + " --leaderboard " + board);
  ASSERT_EQ(b.code, 0) << b.err;
  const json rep = json::parse(ReadFile(report));
  EXPECT_GE(rep["scorers"][0]["overall"].get<double>(), 0.95);
  EXPECT_EQ(rep["scorers"].size(), 2u);
  EXPECT_FALSE(rep["significance"].empty());
  EXPECT_EQ(ReadFile(board), b.out);
}

TEST_F(CliTest, BenchmarkMarksSignificantImprovements) {
  const std::string zero = Write("zero.json",
                                 R"({"format_version":1,"h":2,"cats":["E"],)"
                                 R"("normalize_histograms":true,"weights":[0,0],"bias":0})");
  const std::string bench = dir_.File("bench.jsonl");
  WriteBenchmarkJsonl(bench, MakeSyntheticBenchmark({"d1", "d2"}, 200, 9));
  const RunResult b = Run("benchmark --input " + bench + " --scorer zs --scorer conv:" + zero +
                          " --reference conv --n-resamples 1000");
  ASSERT_EQ(b.code, 0) << b.err;
  std::istringstream lines(b.out);
  std::vector<std::string> rows;
  for (std::string line; std::getline(lines, line);) rows.push_back(line);
  ASSERT_EQ(rows.size(), 3u);  // header + two scorers
  EXPECT_NE(rows[1].find("**"), std::string::npos) << b.out;
  EXPECT_EQ(rows[2].find('*'), std::string::npos) << b.out;
}

TEST_F(CliTest, BenchmarkIsIdempotentAndUsesScoreTable) {
  const std::string bench = dir_.File("bench.jsonl");
  WriteBenchmarkJsonl(bench, MakeSyntheticBenchmark({"d"}, 60, 2));
  const std::string args = "benchmark --input " + bench + " --scorer zs --scorer mnli-doc" +
                           " --reference mnli-doc --n-resamples 1000 --seed 5 --scores " +
                           dir_.File("scores.json") + " --report ";
  ASSERT_EQ(Run(args + dir_.File("a.json")).code, 0);
  ASSERT_EQ(Run(args + dir_.File("b.json")).code, 0);
  EXPECT_EQ(ReadFile(dir_.File("a.json")), ReadFile(dir_.File("b.json")));
  EXPECT_EQ(json::parse(ReadFile(dir_.File("scores.json")))["scores"].size(), 2u);
}

TEST_F(CliTest, CacheDirFromEnvironment) {
  const std::string cache = dir_.File("cache");
  const RunResult r = Run("score " + WorkedExampleArgs(), "NLIC_CACHE_DIR=" + cache);
  ASSERT_EQ(r.code, 0) << r.err;
  size_t files = 0;
  for (const auto& e : std::filesystem::directory_iterator(cache)) files += e.is_regular_file();
  EXPECT_EQ(files, 1u);
  const RunResult again = Run("score " + WorkedExampleArgs(), "NLIC_CACHE_DIR=" + cache);
  EXPECT_EQ(again.out, r.out);
}

TEST_F(CliTest, ThroughputReportsRate) {
  const RunResult r = Run("throughput --synthetic-docs 20 --warmup 2 --runs 2");
  ASSERT_EQ(r.code, 0) << r.err;
  const json out = json::parse(r.out);
  EXPECT_GT(out["docs_per_min"].get<double>(), 0.0);
  EXPECT_EQ(out["runs"].size(), 2u);
  EXPECT_EQ(out["runs"][0]["docs"], 20);
}

}  // namespace
}  // namespace nlic
