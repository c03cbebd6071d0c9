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

#include "nlic/segmenter.h"

#include <algorithm>
#include <cctype>

#include "nlic/error.h"

namespace nlic {
namespace {

struct CodePoint {
  char32_t value;
  size_t length;
};

// Malformed sequences decode as U+FFFD with length 1 so scanning always
// advances.
CodePoint DecodeAt(std::string_view s, size_t pos) {
  const auto b0 = static_cast<unsigned char>(s[pos]);
  if (b0 < 0x80) return {b0, 1};
  size_t len = 0;
  char32_t cp = 0;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    return {0xFFFD, 1};
  }
  if (pos + len > s.size()) return {0xFFFD, 1};
  for (size_t k = 1; k < len; ++k) {
    const auto b = static_cast<unsigned char>(s[pos + k]);
    if ((b & 0xC0) != 0x80) return {0xFFFD, 1};
    cp = (cp << 6) | (b & 0x3F);
  }
  return {cp, len};
}

bool IsSpace(char32_t c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v' || c == 0x00A0 || (c >= 0x2000 && c <= 0x200A) ||
         c == 0x2028 || c == 0x2029 || c == 0x202F || c == 0x3000;
}

bool IsTerminal(char32_t c) { return c == '.' || c == '!' || c == '?'; }

bool IsClosing(char32_t c) {
  return c == '"' || c == '\'' || c == ')' || c == ']' || c == 0x2019 ||
         c == 0x201D || c == 0x00BB;
}

bool IsOpeningQuote(char32_t c) {
  return c == '"' || c == '\'' || c == 0x2018 || c == 0x201C || c == 0x00AB;
}

bool IsUpperOrDigit(char32_t c) {
  if ((c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9')) return true;
  if (c >= 0x00C0 && c <= 0x00DE && c != 0x00D7) return true;  // Latin-1
  if (c >= 0x0391 && c <= 0x03A9) return true;                  // Greek
  if (c >= 0x0410 && c <= 0x042F) return true;                  // Cyrillic
  return false;
}

std::string_view Trim(std::string_view s) {
  size_t begin = 0;
  while (begin < s.size()) {
    const CodePoint cp = DecodeAt(s, begin);
    if (!IsSpace(cp.value)) break;
    begin += cp.length;
  }
  size_t end = begin;
  for (size_t pos = begin; pos < s.size();) {
    const CodePoint cp = DecodeAt(s, pos);
    pos += cp.length;
    if (!IsSpace(cp.value)) end = pos;
  }
  return s.substr(begin, end - begin);
}

// The whitespace-delimited token ending at `period` (inclusive), lowercased,
// with leading brackets and quotes removed.
std::string TokenEndingAt(std::string_view text, size_t start, size_t period) {
  size_t begin = period;
  while (begin > start) {
    const auto c = static_cast<unsigned char>(text[begin - 1]);
    if (std::isspace(c)) break;
    --begin;
  }
  while (begin < period && (text[begin] == '(' || text[begin] == '[' ||
                            text[begin] == '"' || text[begin] == '\'')) {
    ++begin;
  }
  std::string token(text.substr(begin, period - begin + 1));
  for (char& c : token) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return token;
}

bool IsAbbreviation(const std::string& token) {
  const auto& list = AbbreviationList();
  return std::find(list.begin(), list.end(), token) != list.end();
}

bool IsBlankLine(std::string_view line) { return Trim(line).empty(); }

}  // namespace

std::string_view GranularityName(Granularity g) {
  switch (g) {
    case Granularity::kFull: return "full";
    case Granularity::kParagraph: return "paragraph";
    case Granularity::kTwoSentence: return "two_sentence";
    case Granularity::kSentence: return "sentence";
  }
  return "unknown";
}

Granularity ParseGranularity(std::string_view name) {
  if (name == "full") return Granularity::kFull;
  if (name == "paragraph") return Granularity::kParagraph;
  if (name == "two_sentence" || name == "2sent") {
    return Granularity::kTwoSentence;
  }
  if (name == "sentence") return Granularity::kSentence;
  throw Error(ErrorKind::kInvalidArgument,
              "unknown granularity '" + std::string(name) + "'");
}

const std::vector<std::string_view>& AbbreviationList() {
  static const std::vector<std::string_view> kList = {
      "mr.",   "mrs.",  "ms.",   "dr.",   "prof.", "sr.",   "jr.",
      "st.",   "mt.",   "gen.",  "gov.",  "sen.",  "rep.",  "lt.",
      "col.",  "capt.", "sgt.",  "rev.",  "hon.",  "pres.", "u.s.",
      "u.k.",  "u.n.",  "e.g.",  "i.e.",  "vs.",   "no.",   "inc.",
      "corp.", "ltd.",  "co.",   "jan.",  "feb.",  "aug.",  "sept.",
      "oct.",  "nov.",  "dec.",  "approx.", "a.m.", "p.m.",
  };
  return kList;
}

std::vector<std::string> SplitSentences(std::string_view text) {
  if (Trim(text).empty()) {
    throw Error(ErrorKind::kEmptyInput, "text is empty or whitespace-only");
  }
  std::vector<std::string> sentences;
  size_t start = 0;
  size_t pos = 0;
  while (pos < text.size()) {
    const CodePoint cp = DecodeAt(text, pos);
    if (!IsTerminal(cp.value)) {
      pos += cp.length;
      continue;
    }
    const size_t first_terminal = pos;
    size_t run_end = pos;
    bool only_one_period = cp.value == '.';
    size_t terminals = 0;
    while (run_end < text.size()) {
      const CodePoint next = DecodeAt(text, run_end);
      if (IsTerminal(next.value)) {
        ++terminals;
      } else if (!IsClosing(next.value)) {
        break;
      }
      run_end += next.length;
    }
    only_one_period = only_one_period && terminals == 1;
    if (run_end >= text.size()) break;
    const CodePoint after = DecodeAt(text, run_end);
    if (!IsSpace(after.value)) {
      pos = run_end;
      continue;
    }
    size_t next_start = run_end;
    while (next_start < text.size()) {
      const CodePoint ws = DecodeAt(text, next_start);
      if (!IsSpace(ws.value)) break;
      next_start += ws.length;
    }
    if (next_start >= text.size()) break;
    const CodePoint lead = DecodeAt(text, next_start);
    const bool starts_sentence =
        IsUpperOrDigit(lead.value) || IsOpeningQuote(lead.value);
    const bool abbreviation =
        only_one_period &&
        IsAbbreviation(TokenEndingAt(text, start, first_terminal));
    if (starts_sentence && !abbreviation) {
      const std::string_view sentence =
          Trim(text.substr(start, run_end - start));
      if (!sentence.empty()) sentences.emplace_back(sentence);
      start = next_start;
    }
    pos = next_start;
  }
  const std::string_view tail = Trim(text.substr(start));
  if (!tail.empty()) sentences.emplace_back(tail);
  return sentences;
}

BlockList SplitBlocks(std::string_view text, Granularity g, Side side) {
  if (Trim(text).empty()) {
    throw Error(ErrorKind::kEmptyInput, "text is empty or whitespace-only");
  }
  if (side == Side::kSummary && g != Granularity::kFull &&
      g != Granularity::kSentence) {
    throw Error(ErrorKind::kUnsupportedGranularity,
                "summaries support only full or sentence granularity, got " +
                    std::string(GranularityName(g)));
  }
  BlockList out;
  out.side = side;
  out.granularity = g;
  switch (g) {
    case Granularity::kFull:
      out.blocks.emplace_back(Trim(text));
      break;
    case Granularity::kParagraph: {
      std::string current;
      auto flush = [&] {
        const std::string_view block = Trim(current);
        if (!block.empty()) out.blocks.emplace_back(block);
        current.clear();
      };
      size_t line_start = 0;
      while (line_start <= text.size()) {
        size_t line_end = text.find('\n', line_start);
        if (line_end == std::string_view::npos) line_end = text.size();
        const std::string_view line =
            text.substr(line_start, line_end - line_start);
        if (IsBlankLine(line)) {
          flush();
        } else {
          if (!current.empty()) current.push_back('\n');
          current.append(line);
        }
        line_start = line_end + 1;
      }
      flush();
      break;
    }
    case Granularity::kTwoSentence: {
      const std::vector<std::string> sentences = SplitSentences(text);
      for (size_t i = 0; i < sentences.size(); i += 2) {
        if (i + 1 < sentences.size()) {
          out.blocks.push_back(sentences[i] + " " + sentences[i + 1]);
        } else {
          out.blocks.push_back(sentences[i]);
        }
      }
      break;
    }
    case Granularity::kSentence:
      out.blocks = SplitSentences(text);
      break;
  }
  return out;
}

}  // namespace nlic
