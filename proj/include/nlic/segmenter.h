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

#ifndef NLIC_SEGMENTER_H_
#define NLIC_SEGMENTER_H_

#include <string>
#include <string_view>
#include <vector>

namespace nlic {

enum class Granularity { kFull, kParagraph, kTwoSentence, kSentence };
enum class Side { kDocument, kSummary };

std::string_view GranularityName(Granularity g);
// Accepts "full", "paragraph", "two_sentence" (or "2sent"), "sentence".
Granularity ParseGranularity(std::string_view name);

struct BlockList {
  std::vector<std::string> blocks;
  Side side = Side::kDocument;
  Granularity granularity = Granularity::kSentence;

  size_t size() const { return blocks.size(); }
  bool empty() const { return blocks.empty(); }
};

// Bumped whenever the abbreviation list changes; sentence boundaries (and
// therefore cached matrices) are only reproducible within one version.
inline constexpr int kAbbreviationListVersion = 1;

const std::vector<std::string_view>& AbbreviationList();

// Rule-based splitter. A boundary follows a run of terminal punctuation
// (. ! ?) and any closing quotes/brackets, when the run is followed by
// whitespace and then an uppercase letter, a digit or an opening quote, or by
// the end of the text. A period ending a listed abbreviation never splits.
// Returned sentences are trimmed substrings of `text`.
std::vector<std::string> SplitSentences(std::string_view text);

// Summaries only accept kFull and kSentence.
BlockList SplitBlocks(std::string_view text, Granularity g, Side side);

}  // namespace nlic

#endif  // NLIC_SEGMENTER_H_
