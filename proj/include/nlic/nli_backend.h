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

#ifndef NLIC_NLI_BACKEND_H_
#define NLIC_NLI_BACKEND_H_

#include <chrono>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace nlic {

// Probabilities for (entailment, contradiction, neutral).
struct NliProbs {
  double e = 0.0;
  double c = 0.0;
  double n = 0.0;

  friend bool operator==(const NliProbs&, const NliProbs&) = default;
};

inline constexpr double kSimplexTolerance = 1e-6;

bool OnSimplex(const NliProbs& p, double tol = kSimplexTolerance);

struct BackendId {
  std::string name;
  std::string version;

  friend bool operator==(const BackendId&, const BackendId&) = default;
};

struct TextPair {
  std::string premise;
  std::string hypothesis;
};

// Backends are immutable after construction; ScorePairs may be called from
// several threads at once.
class NliBackend {
 public:
  virtual ~NliBackend() = default;
  virtual BackendId id() const = 0;
  // One result per pair, in input order. Throws Error on empty texts
  // (kEmptyPair) or backend failure.
  virtual std::vector<NliProbs> ScorePairs(
      std::span<const TextPair> pairs) const = 0;
};

// Lowercased runs of alphanumeric characters (bytes >= 0x80 count as
// alphanumeric so non-ASCII words stay whole).
std::vector<std::string> MockTokens(std::string_view text);

// r = |tokens(h) ∩ tokens(p)| / |tokens(h)| over unique tokens;
// returns (r, 0.1 (1 - r), 0.9 (1 - r)).
NliProbs MockScore(std::string_view premise, std::string_view hypothesis);

class MockBackend : public NliBackend {
 public:
  MockBackend() = default;
  // Sleeps for `per_pair_cost` per scored pair; emulates inference cost in
  // throughput and cache experiments.
  explicit MockBackend(std::chrono::microseconds per_pair_cost)
      : per_pair_cost_(per_pair_cost) {}

  BackendId id() const override { return {"mock", "1"}; }
  std::vector<NliProbs> ScorePairs(
      std::span<const TextPair> pairs) const override;

 private:
  std::chrono::microseconds per_pair_cost_{0};
};

// Serves probabilities recorded in a JSON fixture:
// {"backend":{"name","version"},"entries":[{"premise","hypothesis","e","c","n"}]}
class FixtureBackend : public NliBackend {
 public:
  FixtureBackend(BackendId id,
                 std::map<std::pair<std::string, std::string>, NliProbs> table);

  static FixtureBackend FromJsonText(std::string_view json_text);
  static FixtureBackend FromFile(const std::string& path);

  BackendId id() const override { return id_; }
  std::vector<NliProbs> ScorePairs(
      std::span<const TextPair> pairs) const override;

  size_t size() const { return table_.size(); }

 private:
  BackendId id_;
  std::map<std::pair<std::string, std::string>, NliProbs> table_;
};

struct RemoteOptions {
  std::string endpoint = "http://127.0.0.1:8080";  // scheme://host:port
  std::string path = "/nli";
  size_t batch_size = 64;
  size_t max_in_flight = 4;
  std::chrono::milliseconds timeout{30000};
  BackendId id{"remote", "unversioned"};
};

// Client for the POST /nli protocol:
//   request  {"pairs":[{"premise","hypothesis"},...]}
//   response {"probs":[[e,c,n],...]}
// Pairs are sent in batches of `batch_size`, at most `max_in_flight` batches
// concurrently; each batch is retried once before BackendUnavailable.
class RemoteBackend : public NliBackend {
 public:
  explicit RemoteBackend(RemoteOptions options);

  BackendId id() const override { return options_.id; }
  std::vector<NliProbs> ScorePairs(
      std::span<const TextPair> pairs) const override;

  const RemoteOptions& options() const { return options_; }

 private:
  std::vector<NliProbs> PostBatch(std::span<const TextPair> batch) const;

  RemoteOptions options_;
};

// Wire-format helpers shared by the client and test servers.
std::string EncodeNliRequest(std::span<const TextPair> pairs);
std::vector<TextPair> DecodeNliRequest(std::string_view body);
std::string EncodeNliResponse(std::span<const NliProbs> probs);
std::vector<NliProbs> DecodeNliResponse(std::string_view body,
                                        size_t expected);

}  // namespace nlic

#endif  // NLIC_NLI_BACKEND_H_
