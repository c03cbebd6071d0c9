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

#ifndef NLIC_BASELINES_H_
#define NLIC_BASELINES_H_

#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "nlic/nli_backend.h"

namespace nlic {

struct Entity {
  std::string text;
  std::string type;
};

class EntityExtractor {
 public:
  virtual ~EntityExtractor() = default;
  virtual std::string version() const = 0;
  virtual std::vector<Entity> Extract(std::string_view text) const = 0;
};

// Proper-noun-like types; the rule-based extractor emits "PROPN".
std::set<std::string> DefaultEntityTypes();

// Maximal runs of capitalized tokens, skipping a short list of function
// words that are capitalized only because they open a sentence.
class CapitalizedSpanExtractor : public EntityExtractor {
 public:
  std::string version() const override { return "capitalized-span-1"; }
  std::vector<Entity> Extract(std::string_view text) const override;
};

// Talks line-delimited JSON to a long-running tagger process:
//   stdin  {"text": "..."}
//   stdout {"entities":[{"text","type"},...]}
// Calls are serialized over the single pipe.
class ExternalEntityExtractor : public EntityExtractor {
 public:
  explicit ExternalEntityExtractor(std::vector<std::string> argv);
  ~ExternalEntityExtractor() override;
  ExternalEntityExtractor(const ExternalEntityExtractor&) = delete;
  ExternalEntityExtractor& operator=(const ExternalEntityExtractor&) = delete;

  std::string version() const override { return "external:" + argv_.front(); }
  std::vector<Entity> Extract(std::string_view text) const override;

 private:
  std::vector<std::string> argv_;
  int pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  mutable std::string pending_;
  mutable std::mutex mu_;
};

// 0 when some summary entity of a filtered type (case-folded) is missing
// from the document's entity strings, else 1. No entities scores 1.
double NerOverlapScore(std::string_view document, std::string_view summary,
                       const EntityExtractor& extractor,
                       const std::set<std::string>& types = DefaultEntityTypes());

// Entailment probability of (full document, full summary).
double MnliDocScore(std::string_view document, std::string_view summary,
                    const NliBackend& backend);

}  // namespace nlic

#endif  // NLIC_BASELINES_H_
