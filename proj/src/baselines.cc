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

#include "nlic/baselines.h"

#include <fcntl.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cctype>
#include <cerrno>
#include <cstring>

#include "json.hpp"
#include "nlic/error.h"
#include "nlic/segmenter.h"

namespace nlic {
namespace {

using nlohmann::json;

const std::set<std::string>& SentenceOpeners() {
  static const std::set<std::string> kWords = {
      "A",     "An",    "The",   "This", "That",  "These", "Those", "It",
      "He",    "She",   "They",  "We",   "I",     "You",   "In",    "On",
      "At",    "But",   "And",   "Or",   "If",    "When",  "While", "After",
      "Before", "There", "Here",  "His",  "Her",   "Their", "Our",   "Its",
      "As",    "For",   "From",  "With", "By",    "To",    "Of",    "So"};
  return kWords;
}

std::string Fold(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

void WriteAll(int fd, const std::string& data) {
  size_t off = 0;
  while (off < data.size()) {
    const ssize_t n = ::write(fd, data.data() + off, data.size() - off);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) {
      throw Error(ErrorKind::kExtractorUnavailable,
                  std::string("write to extractor failed: ") + std::strerror(errno));
    }
    off += static_cast<size_t>(n);
  }
}

}  // namespace

std::set<std::string> DefaultEntityTypes() {
  return {"PERSON", "PER", "LOCATION", "LOC", "GPE", "ORGANIZATION",
          "ORG",    "NORP", "FAC",     "PROPN"};
}

std::vector<Entity> CapitalizedSpanExtractor::Extract(std::string_view text) const {
  std::vector<Entity> out;
  std::string span;
  auto flush = [&] {
    if (!span.empty()) out.push_back({span, "PROPN"});
    span.clear();
  };
  size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    size_t end = pos;
    while (end < text.size() && !std::isspace(static_cast<unsigned char>(text[end]))) ++end;
    std::string_view raw = text.substr(pos, end - pos);
    pos = end;
    // Strip surrounding punctuation but remember whether the token closed a
    // clause, which also ends an entity run.
    size_t b = 0;
    size_t e = raw.size();
    while (b < e && std::ispunct(static_cast<unsigned char>(raw[b]))) ++b;
    bool breaks = false;
    while (e > b && std::ispunct(static_cast<unsigned char>(raw[e - 1]))) {
      breaks = breaks || raw[e - 1] != '\'';
      --e;
    }
    const std::string_view word = raw.substr(b, e - b);
    const bool capitalized =
        !word.empty() && std::isupper(static_cast<unsigned char>(word[0]));
    if (b > 0) flush();
    if (capitalized && !SentenceOpeners().count(std::string(word))) {
      if (!span.empty()) span.push_back(' ');
      span.append(word);
    } else {
      flush();
    }
    if (breaks) flush();
  }
  flush();
  return out;
}

ExternalEntityExtractor::ExternalEntityExtractor(std::vector<std::string> argv)
    : argv_(std::move(argv)) {
  if (argv_.empty()) {
    throw Error(ErrorKind::kExtractorUnavailable, "empty extractor command");
  }
  ::signal(SIGPIPE, SIG_IGN);
  int in_pipe[2];
  int out_pipe[2];
  if (::pipe(in_pipe) != 0 || ::pipe(out_pipe) != 0) {
    throw Error(ErrorKind::kExtractorUnavailable, "pipe() failed");
  }
  // Exec failure is reported through a close-on-exec pipe.
  int err_pipe[2];
  if (::pipe2(err_pipe, O_CLOEXEC) != 0) {
    throw Error(ErrorKind::kExtractorUnavailable, "pipe2() failed");
  }
  const pid_t pid = ::fork();
  if (pid < 0) throw Error(ErrorKind::kExtractorUnavailable, "fork() failed");
  if (pid == 0) {
    ::dup2(in_pipe[0], STDIN_FILENO);
    ::dup2(out_pipe[1], STDOUT_FILENO);
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    ::close(out_pipe[0]);
    ::close(out_pipe[1]);
    ::close(err_pipe[0]);
    std::vector<char*> args;
    for (std::string& a : argv_) args.push_back(a.data());
    args.push_back(nullptr);
    ::execvp(args[0], args.data());
    const int code = errno;
    [[maybe_unused]] ssize_t ignored = ::write(err_pipe[1], &code, sizeof(code));
    ::_exit(127);
  }
  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  ::close(err_pipe[1]);
  int exec_errno = 0;
  const ssize_t got = ::read(err_pipe[0], &exec_errno, sizeof(exec_errno));
  ::close(err_pipe[0]);
  pid_ = pid;
  to_child_ = in_pipe[1];
  from_child_ = out_pipe[0];
  if (got > 0) {
    throw Error(ErrorKind::kExtractorUnavailable,
                "cannot exec " + argv_.front() + ": " + std::strerror(exec_errno));
  }
}

ExternalEntityExtractor::~ExternalEntityExtractor() {
  if (to_child_ >= 0) ::close(to_child_);
  if (from_child_ >= 0) ::close(from_child_);
  if (pid_ > 0) {
    int status = 0;
    ::waitpid(pid_, &status, 0);
  }
}

std::vector<Entity> ExternalEntityExtractor::Extract(std::string_view text) const {
  std::lock_guard<std::mutex> lock(mu_);
  WriteAll(to_child_, json{{"text", text}}.dump() + "\n");
  size_t newline;
  while ((newline = pending_.find('\n')) == std::string::npos) {
    char buf[4096];
    const ssize_t n = ::read(from_child_, buf, sizeof(buf));
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) {
      throw Error(ErrorKind::kExtractorUnavailable,
                  "extractor " + argv_.front() + " closed its output");
    }
    pending_.append(buf, static_cast<size_t>(n));
  }
  const std::string line = pending_.substr(0, newline);
  pending_.erase(0, newline + 1);
  try {
    std::vector<Entity> out;
    const json reply = json::parse(line);
    for (const json& e : reply.at("entities")) {
      out.push_back({e.at("text").get<std::string>(), e.at("type").get<std::string>()});
    }
    return out;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kExtractorUnavailable,
                std::string("malformed extractor reply: ") + e.what());
  }
}

double NerOverlapScore(std::string_view document, std::string_view summary,
                       const EntityExtractor& extractor,
                       const std::set<std::string>& types) {
  auto blank = [](std::string_view s) {
    return s.find_first_not_of(" \t\r\n") == std::string_view::npos;
  };
  if (blank(document) || blank(summary)) {
    throw Error(ErrorKind::kEmptyInput, "document and summary must be non-empty");
  }
  std::set<std::string> doc_entities;
  for (const Entity& e : extractor.Extract(document)) doc_entities.insert(Fold(e.text));
  for (const Entity& e : extractor.Extract(summary)) {
    if (types.count(e.type) && !doc_entities.count(Fold(e.text))) return 0.0;
  }
  return 1.0;
}

double MnliDocScore(std::string_view document, std::string_view summary,
                    const NliBackend& backend) {
  const BlockList doc = SplitBlocks(document, Granularity::kFull, Side::kDocument);
  const BlockList sum = SplitBlocks(summary, Granularity::kFull, Side::kSummary);
  const TextPair pair{doc.blocks.front(), sum.blocks.front()};
  return backend.ScorePairs(std::span<const TextPair>(&pair, 1)).front().e;
}

}  // namespace nlic
