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

#include "nlic/matrix.h"

#include <openssl/evp.h>
#include <unistd.h>

#include <atomic>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "nlic/error.h"

namespace nlic {
namespace {

using nlohmann::json;

}  // namespace

std::string Sha256Hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(),
                 nullptr) != 1) {
    throw Error(ErrorKind::kIo, "SHA-256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xF]);
  }
  return out;
}

namespace {

void AppendField(std::string& buf, std::string_view field) {
  buf += std::to_string(field.size());
  buf.push_back(':');
  buf.append(field);
  buf.push_back(';');
}

}  // namespace

std::vector<Category> CategorySet::Ordered() const {
  std::vector<Category> out;
  if (include_e) out.push_back(Category::kE);
  if (include_n) out.push_back(Category::kN);
  if (include_c) out.push_back(Category::kC);
  return out;
}

std::string_view CategoryName(Category c) {
  switch (c) {
    case Category::kE: return "E";
    case Category::kN: return "N";
    case Category::kC: return "C";
  }
  return "?";
}

double CategoryValue(const NliProbs& p, Category c) {
  switch (c) {
    case Category::kE: return p.e;
    case Category::kN: return p.n;
    case Category::kC: return p.c;
  }
  return 0.0;
}

CategorySet ParseCategorySet(std::string_view spec) {
  CategorySet cats{false, false, false};
  for (char ch : spec) {
    switch (ch) {
      case 'E': case 'e': cats.include_e = true; break;
      case 'N': case 'n': cats.include_n = true; break;
      case 'C': case 'c': cats.include_c = true; break;
      case ',': case ' ': case '+': break;
      default:
        throw Error(ErrorKind::kInvalidArgument,
                    "unknown NLI category '" + std::string(1, ch) + "'");
    }
  }
  if (!cats.valid()) {
    throw Error(ErrorKind::kInvalidArgument, "category set is empty");
  }
  return cats;
}

std::string FormatCategorySet(const CategorySet& cats) {
  std::string out;
  for (Category c : cats.Ordered()) out += CategoryName(c);
  return out;
}

std::vector<double> ScalarGrid::Column(size_t col) const {
  std::vector<double> out(m);
  for (size_t i = 0; i < m; ++i) out[i] = at(i, col);
  return out;
}

PairMatrix BuildPairMatrix(const BlockList& doc, const BlockList& summary,
                           const NliBackend& backend) {
  if (doc.empty() || summary.empty()) {
    throw Error(ErrorKind::kDimensionZero,
                "pair matrix needs at least one document and summary block");
  }
  if (doc.side != Side::kDocument || summary.side != Side::kSummary) {
    throw Error(ErrorKind::kInvalidArgument,
                "expected (document, summary) block lists");
  }
  std::vector<TextPair> pairs;
  pairs.reserve(doc.size() * summary.size());
  for (const std::string& premise : doc.blocks) {
    for (const std::string& hypothesis : summary.blocks) {
      pairs.push_back({premise, hypothesis});
    }
  }
  PairMatrix mat;
  mat.m = doc.size();
  mat.n = summary.size();
  mat.doc_granularity = doc.granularity;
  mat.sum_granularity = summary.granularity;
  mat.backend = backend.id();
  mat.cells = backend.ScorePairs(pairs);
  if (mat.cells.size() != pairs.size()) {
    throw Error(ErrorKind::kBackendUnavailable,
                "backend returned " + std::to_string(mat.cells.size()) +
                    " results for " + std::to_string(pairs.size()) + " pairs");
  }
  for (const NliProbs& p : mat.cells) {
    if (!OnSimplex(p)) {
      throw Error(ErrorKind::kBackendUnavailable,
                  "backend produced probabilities off the simplex");
    }
  }
  return mat;
}

std::vector<ScalarGrid> SelectCategoryView(const PairMatrix& mat,
                                           const CategorySet& cats) {
  std::vector<ScalarGrid> grids;
  for (Category c : cats.Ordered()) {
    ScalarGrid grid{mat.m, mat.n, std::vector<double>(mat.cells.size())};
    for (size_t k = 0; k < mat.cells.size(); ++k) {
      grid.values[k] = CategoryValue(mat.cells[k], c);
    }
    grids.push_back(std::move(grid));
  }
  return grids;
}

std::string CacheKey(std::string_view doc_text, std::string_view summary_text,
                     Granularity doc_g, Granularity sum_g,
                     const BackendId& backend) {
  std::string buf;
  buf.reserve(doc_text.size() + summary_text.size() + 128);
  AppendField(buf, "nlic-matrix-v1");
  AppendField(buf, std::to_string(kAbbreviationListVersion));
  AppendField(buf, doc_text);
  AppendField(buf, summary_text);
  AppendField(buf, GranularityName(doc_g));
  AppendField(buf, GranularityName(sum_g));
  AppendField(buf, backend.name);
  AppendField(buf, backend.version);
  return Sha256Hex(buf);
}

std::string PairMatrixToJson(const PairMatrix& mat, const std::string& key) {
  json cells = json::array();
  for (size_t i = 0; i < mat.m; ++i) {
    json row = json::array();
    for (size_t j = 0; j < mat.n; ++j) {
      const NliProbs& p = mat.at(i, j);
      row.push_back({p.e, p.c, p.n});
    }
    cells.push_back(std::move(row));
  }
  json doc = {
      {"key", key},
      {"m", mat.m},
      {"n", mat.n},
      {"doc_granularity", GranularityName(mat.doc_granularity)},
      {"sum_granularity", GranularityName(mat.sum_granularity)},
      {"backend", {{"name", mat.backend.name}, {"version", mat.backend.version}}},
      {"cells", std::move(cells)},
  };
  return doc.dump();
}

PairMatrix PairMatrixFromJson(std::string_view text, std::string* key) {
  try {
    const json doc = json::parse(text);
    PairMatrix mat;
    mat.m = doc.at("m").get<size_t>();
    mat.n = doc.at("n").get<size_t>();
    mat.doc_granularity =
        ParseGranularity(doc.at("doc_granularity").get<std::string>());
    mat.sum_granularity =
        ParseGranularity(doc.at("sum_granularity").get<std::string>());
    mat.backend = {doc.at("backend").at("name").get<std::string>(),
                   doc.at("backend").at("version").get<std::string>()};
    const json& cells = doc.at("cells");
    if (cells.size() != mat.m) {
      throw Error(ErrorKind::kSchemaMismatch, "cache row count mismatch");
    }
    mat.cells.reserve(mat.m * mat.n);
    for (const json& row : cells) {
      if (row.size() != mat.n) {
        throw Error(ErrorKind::kSchemaMismatch, "cache column count mismatch");
      }
      for (const json& t : row) {
        mat.cells.push_back(
            {t.at(0).get<double>(), t.at(1).get<double>(), t.at(2).get<double>()});
      }
    }
    if (key != nullptr) *key = doc.at("key").get<std::string>();
    return mat;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kSchemaMismatch,
                std::string("malformed matrix JSON: ") + e.what());
  }
}

std::string FixtureJson(const PairMatrix& mat, const BlockList& doc,
                        const BlockList& summary) {
  if (doc.size() != mat.m || summary.size() != mat.n) {
    throw Error(ErrorKind::kInvalidArgument,
                "block lists do not match matrix dimensions");
  }
  json entries = json::array();
  for (size_t i = 0; i < mat.m; ++i) {
    for (size_t j = 0; j < mat.n; ++j) {
      const NliProbs& p = mat.at(i, j);
      entries.push_back({{"premise", doc.blocks[i]},
                         {"hypothesis", summary.blocks[j]},
                         {"e", p.e},
                         {"c", p.c},
                         {"n", p.n}});
    }
  }
  json out = {
      {"backend", {{"name", mat.backend.name}, {"version", mat.backend.version}}},
      {"entries", std::move(entries)},
  };
  return out.dump(2);
}

MatrixCache::MatrixCache(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) {
    throw Error(ErrorKind::kIo,
                "cannot create cache dir " + dir_.string() + ": " + ec.message());
  }
}

std::filesystem::path MatrixCache::PathFor(const std::string& key) const {
  return dir_ / (key + ".json");
}

std::optional<PairMatrix> MatrixCache::Get(const std::string& key) {
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = memory_.find(key);
    if (it != memory_.end()) return it->second;
  }
  std::ifstream in(PathFor(key));
  if (!in) return std::nullopt;
  std::stringstream buffer;
  buffer << in.rdbuf();
  std::string stored_key;
  PairMatrix mat = PairMatrixFromJson(buffer.str(), &stored_key);
  if (stored_key != key) return std::nullopt;
  std::lock_guard<std::mutex> lock(mu_);
  memory_.emplace(key, mat);
  return mat;
}

void MatrixCache::Put(const std::string& key, const PairMatrix& mat) {
  static std::atomic<unsigned long> counter{0};
  const std::filesystem::path final_path = PathFor(key);
  std::filesystem::path tmp = final_path;
  tmp += ".tmp." + std::to_string(::getpid()) + "." +
         std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id())) +
         "." + std::to_string(counter.fetch_add(1));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::kIo, "cannot write " + tmp.string());
    out << PairMatrixToJson(mat, key);
    if (!out) throw Error(ErrorKind::kIo, "short write to " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, final_path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorKind::kIo, "cannot publish cache entry " + final_path.string());
  }
  std::lock_guard<std::mutex> lock(mu_);
  memory_.insert_or_assign(key, mat);
}

void MatrixCache::ClearMemory() {
  std::lock_guard<std::mutex> lock(mu_);
  memory_.clear();
}

PairMatrix BuildOrLoad(std::string_view doc_text, std::string_view summary_text,
                       const MatrixRequest& request, const NliBackend& backend,
                       MatrixCache* cache) {
  std::string key;
  if (cache != nullptr) {
    key = CacheKey(doc_text, summary_text, request.doc_granularity,
                   request.sum_granularity, backend.id());
    if (std::optional<PairMatrix> hit = cache->Get(key)) return *std::move(hit);
  }
  const BlockList doc =
      SplitBlocks(doc_text, request.doc_granularity, Side::kDocument);
  const BlockList summary =
      SplitBlocks(summary_text, request.sum_granularity, Side::kSummary);
  PairMatrix mat = BuildPairMatrix(doc, summary, backend);
  if (cache != nullptr) cache->Put(key, mat);
  return mat;
}

}  // namespace nlic
