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

#include "nlic/nli_backend.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>
#include <unordered_set>

#include "json.hpp"
#include "nlic/error.h"

namespace nlic {
namespace {

using nlohmann::json;

bool IsBlank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isspace(static_cast<unsigned char>(c));
  });
}

void CheckPair(const TextPair& pair) {
  if (IsBlank(pair.premise) || IsBlank(pair.hypothesis)) {
    throw Error(ErrorKind::kEmptyPair, "premise and hypothesis must be non-empty");
  }
}

NliProbs ProbsFromArray(const json& triple) {
  if (!triple.is_array() || triple.size() != 3) {
    throw Error(ErrorKind::kBackendUnavailable,
                "malformed probability triple: " + triple.dump());
  }
  NliProbs p{triple[0].get<double>(), triple[1].get<double>(),
             triple[2].get<double>()};
  if (!OnSimplex(p)) {
    throw Error(ErrorKind::kBackendUnavailable,
                "probability triple off the simplex: " + triple.dump());
  }
  return p;
}

}  // namespace

bool OnSimplex(const NliProbs& p, double tol) {
  for (double v : {p.e, p.c, p.n}) {
    if (!(v >= 0.0 && v <= 1.0)) return false;
  }
  return std::abs(p.e + p.c + p.n - 1.0) <= tol;
}

std::vector<std::string> MockTokens(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isalnum(c) || c >= 0x80) {
      current.push_back(static_cast<char>(std::tolower(c)));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

NliProbs MockScore(std::string_view premise, std::string_view hypothesis) {
  if (IsBlank(premise)) {
    throw Error(ErrorKind::kEmptyPair, "empty premise");
  }
  const std::vector<std::string> hyp_tokens = MockTokens(hypothesis);
  if (hyp_tokens.empty()) {
    throw Error(ErrorKind::kEmptyPair, "hypothesis has no tokens");
  }
  const std::vector<std::string> prem_tokens = MockTokens(premise);
  const std::unordered_set<std::string_view> prem(prem_tokens.begin(),
                                                  prem_tokens.end());
  const std::unordered_set<std::string_view> hyp(hyp_tokens.begin(),
                                                 hyp_tokens.end());
  size_t shared = 0;
  for (std::string_view t : hyp) shared += prem.count(t);
  const double r = static_cast<double>(shared) / static_cast<double>(hyp.size());
  return {r, 0.1 * (1.0 - r), 0.9 * (1.0 - r)};
}

std::vector<NliProbs> MockBackend::ScorePairs(
    std::span<const TextPair> pairs) const {
  std::vector<NliProbs> out;
  out.reserve(pairs.size());
  for (const TextPair& pair : pairs) {
    CheckPair(pair);
    out.push_back(MockScore(pair.premise, pair.hypothesis));
  }
  if (per_pair_cost_.count() > 0) {
    std::this_thread::sleep_for(per_pair_cost_ * pairs.size());
  }
  return out;
}

FixtureBackend::FixtureBackend(
    BackendId id, std::map<std::pair<std::string, std::string>, NliProbs> table)
    : id_(std::move(id)), table_(std::move(table)) {
  if (id_.name.empty() || id_.version.empty()) {
    throw Error(ErrorKind::kInvalidArgument,
                "fixture backend name and version must be non-empty");
  }
}

FixtureBackend FixtureBackend::FromJsonText(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kInvalidArgument,
                std::string("fixture is not valid JSON: ") + e.what());
  }
  try {
    BackendId id{doc.at("backend").at("name").get<std::string>(),
                 doc.at("backend").at("version").get<std::string>()};
    std::map<std::pair<std::string, std::string>, NliProbs> table;
    for (const json& entry : doc.at("entries")) {
      NliProbs p{entry.at("e").get<double>(), entry.at("c").get<double>(),
                 entry.at("n").get<double>()};
      if (!OnSimplex(p)) {
        throw Error(ErrorKind::kInvalidArgument,
                    "fixture entry off the simplex: " + entry.dump());
      }
      table[{entry.at("premise").get<std::string>(),
             entry.at("hypothesis").get<std::string>()}] = p;
    }
    return FixtureBackend(std::move(id), std::move(table));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kInvalidArgument,
                std::string("malformed fixture: ") + e.what());
  }
}

FixtureBackend FixtureBackend::FromFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open fixture " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return FromJsonText(buffer.str());
}

std::vector<NliProbs> FixtureBackend::ScorePairs(
    std::span<const TextPair> pairs) const {
  std::vector<NliProbs> out;
  out.reserve(pairs.size());
  for (const TextPair& pair : pairs) {
    CheckPair(pair);
    auto it = table_.find({pair.premise, pair.hypothesis});
    if (it == table_.end()) {
      throw Error(ErrorKind::kFixtureMiss,
                  "no fixture entry for premise '" + pair.premise.substr(0, 60) +
                      "' / hypothesis '" + pair.hypothesis.substr(0, 60) + "'");
    }
    out.push_back(it->second);
  }
  return out;
}

std::string EncodeNliRequest(std::span<const TextPair> pairs) {
  json body;
  body["pairs"] = json::array();
  for (const TextPair& p : pairs) {
    body["pairs"].push_back({{"premise", p.premise}, {"hypothesis", p.hypothesis}});
  }
  return body.dump();
}

std::vector<TextPair> DecodeNliRequest(std::string_view body) {
  try {
    const json doc = json::parse(body);
    std::vector<TextPair> pairs;
    for (const json& p : doc.at("pairs")) {
      pairs.push_back({p.at("premise").get<std::string>(),
                       p.at("hypothesis").get<std::string>()});
    }
    return pairs;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kInvalidArgument,
                std::string("malformed /nli request: ") + e.what());
  }
}

std::string EncodeNliResponse(std::span<const NliProbs> probs) {
  json body;
  body["probs"] = json::array();
  for (const NliProbs& p : probs) body["probs"].push_back({p.e, p.c, p.n});
  return body.dump();
}

std::vector<NliProbs> DecodeNliResponse(std::string_view body,
                                        size_t expected) {
  json doc;
  try {
    doc = json::parse(body);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kBackendUnavailable,
                std::string("malformed /nli response: ") + e.what());
  }
  if (!doc.contains("probs") || !doc["probs"].is_array() ||
      doc["probs"].size() != expected) {
    throw Error(ErrorKind::kBackendUnavailable,
                "/nli response does not align with request (" +
                    std::to_string(expected) + " pairs)");
  }
  std::vector<NliProbs> out;
  out.reserve(expected);
  try {
    for (const json& triple : doc["probs"]) out.push_back(ProbsFromArray(triple));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kBackendUnavailable,
                std::string("non-numeric /nli probabilities: ") + e.what());
  }
  return out;
}

}  // namespace nlic
