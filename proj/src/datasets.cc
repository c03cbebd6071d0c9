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

#include <algorithm>
#include <cctype>
#include <fstream>

#include "nlic/error.h"

namespace nlic {
namespace {

using nlohmann::json;

[[noreturn]] void Mismatch(MappingRule rule, const std::string& what) {
  throw Error(ErrorKind::kSchemaMismatch,
              std::string(MappingRuleName(rule)) + " annotation: " + what);
}

const json& Field(MappingRule rule, const json& annotation, const char* key) {
  if (!annotation.is_object() || !annotation.contains(key)) {
    Mismatch(rule, std::string("missing field '") + key + "'");
  }
  return annotation.at(key);
}

bool Contains(const std::vector<std::string>& list, const std::string& v) {
  return std::find(list.begin(), list.end(), v) != list.end();
}

bool IsBlank(const std::string& s) {
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isspace(static_cast<unsigned char>(c));
  });
}

}  // namespace

std::string_view SplitName(Split s) {
  return s == Split::kValidation ? "validation" : "test";
}

Split ParseSplit(std::string_view name) {
  if (name == "validation" || name == "val" || name == "valid") {
    return Split::kValidation;
  }
  if (name == "test") return Split::kTest;
  throw Error(ErrorKind::kSchemaMismatch, "unknown split '" + std::string(name) + "'");
}

std::string_view MappingRuleName(MappingRule rule) {
  switch (rule) {
    case MappingRule::kCoGenSumm: return "CoGenSumm";
    case MappingRule::kXSumFaith: return "XSumFaith";
    case MappingRule::kPolytope: return "Polytope";
    case MappingRule::kFactCC: return "FactCC";
    case MappingRule::kSummEval: return "SummEval";
    case MappingRule::kFrank: return "FRANK";
    case MappingRule::kPassThrough: return "PassThrough";
  }
  return "?";
}

DatasetSpec LookupDatasetSpec(std::string_view name) {
  std::string lower(name);
  for (char& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (lower == "cogensumm") return {"cogensumm", MappingRule::kCoGenSumm, true};
  if (lower == "xsumfaith") return {"xsumfaith", MappingRule::kXSumFaith, false};
  if (lower == "polytope") return {"polytope", MappingRule::kPolytope, false};
  if (lower == "factcc") return {"factcc", MappingRule::kFactCC, true};
  if (lower == "summeval") return {"summeval", MappingRule::kSummEval, false};
  if (lower == "frank") return {"frank", MappingRule::kFrank, true};
  if (lower == "passthrough") return {"passthrough", MappingRule::kPassThrough, true};
  throw Error(ErrorKind::kInvalidArgument, "unknown dataset '" + std::string(name) + "'");
}

int MapLabel(MappingRule rule, const json& annotation, const LabelOptions& options) {
  try {
    switch (rule) {
      case MappingRule::kCoGenSumm: {
        const json& v = Field(rule, annotation, "correct");
        if (!v.is_boolean()) Mismatch(rule, "'correct' must be a boolean");
        return v.get<bool>() ? 1 : 0;
      }
      case MappingRule::kXSumFaith: {
        const json& v = Field(rule, annotation, "hallucinations");
        if (!v.is_array()) Mismatch(rule, "'hallucinations' must be a list");
        for (const json& h : v) {
          const std::string type = h.get<std::string>();
          if (type != "intrinsic" && type != "extrinsic") {
            Mismatch(rule, "unknown hallucination type '" + type + "'");
          }
        }
        return v.empty() ? 1 : 0;
      }
      case MappingRule::kPolytope: {
        const json& v = Field(rule, annotation, "errors");
        if (!v.is_array()) Mismatch(rule, "'errors' must be a list");
        int label = 1;
        for (const json& e : v) {
          const std::string name = e.get<std::string>();
          if (Contains(options.polytope_accuracy_errors, name)) {
            label = 0;
          } else if (!Contains(options.polytope_fluency_errors, name)) {
            Mismatch(rule, "unknown error type '" + name + "'");
          }
        }
        return label;
      }
      case MappingRule::kFactCC: {
        const std::string v = Field(rule, annotation, "label").get<std::string>();
        if (v == "CORRECT") return 1;
        if (v == "INCORRECT") return 0;
        Mismatch(rule, "label must be CORRECT or INCORRECT, got '" + v + "'");
      }
      case MappingRule::kSummEval: {
        const json& v = Field(rule, annotation, "consistency");
        if (!v.is_array() || v.empty()) {
          Mismatch(rule, "'consistency' must be a non-empty list");
        }
        bool all_five = true;
        for (const json& s : v) {
          if (!s.is_number()) Mismatch(rule, "consistency scores must be numbers");
          const double score = s.get<double>();
          if (score < 1.0 || score > 5.0) Mismatch(rule, "score outside 1..5");
          all_five = all_five && score == 5.0;
        }
        return all_five ? 1 : 0;
      }
      case MappingRule::kFrank: {
        const json& v = Field(rule, annotation, "no_error");
        if (!v.is_array() || v.empty()) {
          Mismatch(rule, "'no_error' must be a non-empty list");
        }
        size_t votes = 0;
        for (const json& b : v) {
          if (!b.is_boolean()) Mismatch(rule, "votes must be booleans");
          votes += b.get<bool>() ? 1 : 0;
        }
        if (options.frank_strict_majority) return 2 * votes > v.size() ? 1 : 0;
        return 2 * votes >= v.size() ? 1 : 0;
      }
      case MappingRule::kPassThrough: {
        const json& v = Field(rule, annotation, "label");
        if (!v.is_number_integer()) Mismatch(rule, "label must be 0 or 1");
        const int label = v.get<int>();
        if (label != 0 && label != 1) Mismatch(rule, "label must be 0 or 1");
        return label;
      }
    }
  } catch (const json::exception& e) {
    Mismatch(rule, e.what());
  }
  Mismatch(rule, "unknown rule");
}

IngestReport Ingest(const DatasetSpec& spec, std::span<const json> raw,
                    const LabelOptions& options,
                    const std::function<void(const std::string&)>& on_reject) {
  IngestReport report;
  for (size_t index = 0; index < raw.size(); ++index) {
    const json& rec = raw[index];
    if (!rec.is_object()) {
      throw Error(ErrorKind::kSchemaMismatch,
                  "record " + std::to_string(index) + " is not an object");
    }
    const std::string id =
        rec.contains("id") ? (rec["id"].is_string() ? rec["id"].get<std::string>()
                                                    : rec["id"].dump())
                           : spec.name + "-" + std::to_string(index);
    const std::string document = rec.value("document", std::string());
    const std::string summary = rec.value("summary", std::string());
    if (IsBlank(document) || IsBlank(summary)) {
      report.rejected_ids.push_back(id);
      if (on_reject) on_reject(id);
      continue;
    }
    if (!rec.contains("annotation")) {
      throw Error(ErrorKind::kSchemaMismatch, "record " + id + " has no annotation");
    }
    BenchmarkSample s;
    s.id = id;
    s.document = document;
    s.summary = summary;
    s.dataset = spec.name;
    s.label = MapLabel(spec.rule, rec["annotation"], options);
    s.annotations = rec["annotation"];
    if (spec.has_official_split) {
      if (!rec.contains("split") || !rec["split"].is_string()) {
        throw Error(ErrorKind::kSchemaMismatch,
                    spec.name + " record " + id + " lacks its official split");
      }
      s.split = ParseSplit(rec["split"].get<std::string>());
    } else {
      // Parity of the published position, so rejections do not shift splits.
      s.split = index % 2 == 0 ? Split::kValidation : Split::kTest;
    }
    report.samples.push_back(std::move(s));
  }
  return report;
}

DatasetStats ComputeDatasetStats(std::span<const BenchmarkSample> samples) {
  if (samples.empty()) throw Error(ErrorKind::kInvalidArgument, "no samples");
  DatasetStats stats;
  for (const BenchmarkSample& s : samples) {
    SplitStats& split = s.split == Split::kValidation ? stats.validation : stats.test;
    ++split.size;
    split.positives += s.label == 1 ? 1 : 0;
  }
  stats.percent_positive =
      100.0 * static_cast<double>(stats.validation.positives + stats.test.positives) /
      static_cast<double>(samples.size());
  return stats;
}

std::string SampleToJsonLine(const BenchmarkSample& s) {
  json j = {
      {"id", s.id},
      {"dataset", s.dataset},
      {"split", SplitName(s.split)},
      {"document", s.document},
      {"summary", s.summary},
      {"label", s.label},
  };
  if (s.annotations) j["annotations"] = *s.annotations;
  return j.dump();
}

BenchmarkSample SampleFromJson(const json& j) {
  try {
    BenchmarkSample s;
    s.id = j.at("id").get<std::string>();
    s.dataset = j.at("dataset").get<std::string>();
    s.split = ParseSplit(j.at("split").get<std::string>());
    s.document = j.at("document").get<std::string>();
    s.summary = j.at("summary").get<std::string>();
    s.label = j.at("label").get<int>();
    if (s.label != 0 && s.label != 1) {
      throw Error(ErrorKind::kSchemaMismatch, "label must be 0 or 1 for " + s.id);
    }
    if (j.contains("annotations")) s.annotations = j.at("annotations");
    return s;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kSchemaMismatch,
                std::string("malformed benchmark record: ") + e.what());
  }
}

std::vector<json> ReadJsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path);
  std::vector<json> out;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (IsBlank(line)) continue;
    try {
      out.push_back(json::parse(line));
    } catch (const json::exception& e) {
      throw Error(ErrorKind::kSchemaMismatch,
                  path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

std::vector<BenchmarkSample> ReadBenchmarkJsonl(const std::string& path) {
  std::vector<BenchmarkSample> out;
  for (const json& j : ReadJsonl(path)) out.push_back(SampleFromJson(j));
  return out;
}

void WriteBenchmarkJsonl(const std::string& path,
                         std::span<const BenchmarkSample> samples) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path);
  for (const BenchmarkSample& s : samples) out << SampleToJsonLine(s) << "\n";
}

LabeledPair LabeledPairFromJson(const json& j) {
  try {
    LabeledPair p;
    p.id = j.contains("id") ? (j["id"].is_string() ? j["id"].get<std::string>()
                                                   : j["id"].dump())
                            : std::string();
    p.document = j.at("document").get<std::string>();
    if (j.contains("summary")) {
      p.summary = j["summary"].get<std::string>();
    } else {
      p.summary = j.at("claim").get<std::string>();
    }
    p.label = j.at("label").get<int>();
    if (p.label != 0 && p.label != 1) {
      throw Error(ErrorKind::kSchemaMismatch, "label must be 0 or 1");
    }
    return p;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kSchemaMismatch,
                std::string("malformed training record: ") + e.what());
  }
}

std::vector<LabeledPair> ReadTrainingCorpus(const std::string& path) {
  std::vector<LabeledPair> out;
  for (const json& j : ReadJsonl(path)) out.push_back(LabeledPairFromJson(j));
  return out;
}

void WriteTrainingCorpus(const std::string& path, std::span<const LabeledPair> pairs) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path);
  for (const LabeledPair& p : pairs) {
    out << json{{"id", p.id}, {"document", p.document}, {"summary", p.summary},
                {"label", p.label}}.dump()
        << "\n";
  }
}

}  // namespace nlic
