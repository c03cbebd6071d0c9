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

#include <algorithm>
#include <future>

#include "httplib.h"
#include "nlic/error.h"
#include "nlic/nli_backend.h"

namespace nlic {

RemoteBackend::RemoteBackend(RemoteOptions options)
    : options_(std::move(options)) {
  if (options_.batch_size == 0 || options_.max_in_flight == 0) {
    throw Error(ErrorKind::kInvalidArgument,
                "remote batch size and in-flight limit must be >= 1");
  }
  if (options_.id.name.empty() || options_.id.version.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "remote backend id is empty");
  }
}

std::vector<NliProbs> RemoteBackend::PostBatch(
    std::span<const TextPair> batch) const {
  const std::string body = EncodeNliRequest(batch);
  std::string last_error;
  for (int attempt = 0; attempt < 2; ++attempt) {
    httplib::Client client(options_.endpoint);
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(
        options_.timeout);
    client.set_connection_timeout(secs.count(), 0);
    client.set_read_timeout(secs.count(), 0);
    auto res = client.Post(options_.path, body, "application/json");
    if (!res) {
      last_error = "request failed: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status != 200) {
      last_error = "HTTP " + std::to_string(res->status) + ": " + res->body;
      continue;
    }
    return DecodeNliResponse(res->body, batch.size());
  }
  throw Error(ErrorKind::kBackendUnavailable,
              options_.endpoint + options_.path + " " + last_error);
}

std::vector<NliProbs> RemoteBackend::ScorePairs(
    std::span<const TextPair> pairs) const {
  for (const TextPair& p : pairs) {
    if (p.premise.find_first_not_of(" \t\r\n") == std::string::npos ||
        p.hypothesis.find_first_not_of(" \t\r\n") == std::string::npos) {
      throw Error(ErrorKind::kEmptyPair,
                  "premise and hypothesis must be non-empty");
    }
  }
  std::vector<NliProbs> out(pairs.size());
  const size_t n_batches =
      (pairs.size() + options_.batch_size - 1) / options_.batch_size;
  for (size_t wave = 0; wave < n_batches; wave += options_.max_in_flight) {
    const size_t wave_end = std::min(n_batches, wave + options_.max_in_flight);
    std::vector<std::future<std::vector<NliProbs>>> inflight;
    for (size_t b = wave; b < wave_end; ++b) {
      const size_t begin = b * options_.batch_size;
      const size_t len = std::min(options_.batch_size, pairs.size() - begin);
      inflight.push_back(std::async(std::launch::async, [this, pairs, begin, len] {
        return PostBatch(pairs.subspan(begin, len));
      }));
    }
    for (size_t k = 0; k < inflight.size(); ++k) {
      std::vector<NliProbs> probs = inflight[k].get();
      std::copy(probs.begin(), probs.end(),
                out.begin() + (wave + k) * options_.batch_size);
    }
  }
  return out;
}

}  // namespace nlic
