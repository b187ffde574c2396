// Copyright 2026 The faithctl Authors.
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

#include "faithctl/textmeasures.h"

#include <fstream>
#include <unordered_set>

#include "faithctl/errors.h"

namespace faithctl::text {
namespace {

enum class CharClass { kWord, kApostrophe, kSeparator };

struct DecodedChar {
  char32_t code_point;
  std::size_t length;  // bytes consumed; 1 for invalid sequences
  bool valid;
};

DecodedChar DecodeUtf8(std::string_view s, std::size_t pos) {
  const auto lead = static_cast<unsigned char>(s[pos]);
  if (lead < 0x80) return {lead, 1, true};
  std::size_t len = 0;
  char32_t cp = 0;
  if ((lead & 0xE0) == 0xC0) {
    len = 2;
    cp = lead & 0x1F;
  } else if ((lead & 0xF0) == 0xE0) {
    len = 3;
    cp = lead & 0x0F;
  } else if ((lead & 0xF8) == 0xF0) {
    len = 4;
    cp = lead & 0x07;
  } else {
    return {0, 1, false};
  }
  if (pos + len > s.size()) return {0, 1, false};
  for (std::size_t i = 1; i < len; ++i) {
    const auto cont = static_cast<unsigned char>(s[pos + i]);
    if ((cont & 0xC0) != 0x80) return {0, 1, false};
    cp = (cp << 6) | (cont & 0x3F);
  }
  return {cp, len, true};
}

CharClass Classify(char32_t cp) {
  if (cp < 0x80) {
    if ((cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z') ||
        (cp >= '0' && cp <= '9')) {
      return CharClass::kWord;
    }
    return cp == '\'' ? CharClass::kApostrophe : CharClass::kSeparator;
  }
  if (cp == 0x2019) return CharClass::kApostrophe;
  // Latin-1 punctuation and symbols, multiplication and division signs.
  if (cp <= 0xBF || cp == 0xD7 || cp == 0xF7) return CharClass::kSeparator;
  // General Punctuation, CJK symbols, BOM.
  if ((cp >= 0x2000 && cp <= 0x206F) || (cp >= 0x3000 && cp <= 0x303F) ||
      cp == 0xFEFF) {
    return CharClass::kSeparator;
  }
  return CharClass::kWord;
}

char AsciiLower(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

}  // namespace

TokenSeq Tokenize(std::string_view text) {
  TokenSeq out;
  std::string current;
  bool pending_apostrophe = false;

  auto flush = [&] {
    if (!current.empty()) out.tokens.push_back(std::move(current));
    current.clear();
    pending_apostrophe = false;
  };

  std::size_t pos = 0;
  while (pos < text.size()) {
    const DecodedChar ch = DecodeUtf8(text, pos);
    const CharClass cls = ch.valid ? Classify(ch.code_point) : CharClass::kSeparator;
    switch (cls) {
      case CharClass::kWord:
        if (pending_apostrophe) {
          current.push_back('\'');
          pending_apostrophe = false;
        }
        if (ch.length == 1) {
          current.push_back(AsciiLower(text[pos]));
        } else {
          current.append(text.substr(pos, ch.length));
        }
        break;
      case CharClass::kApostrophe:
        if (current.empty() || pending_apostrophe) {
          // Leading or doubled apostrophe: acts as a separator.
          flush();
        } else {
          pending_apostrophe = true;
        }
        break;
      case CharClass::kSeparator:
        flush();
        break;
    }
    pos += ch.length;
  }
  flush();
  return out;
}

std::string Join(const TokenSeq& seq) {
  std::string out;
  for (std::size_t i = 0; i < seq.tokens.size(); ++i) {
    if (i > 0) out.push_back(' ');
    out += seq.tokens[i];
  }
  return out;
}

FirstPersonLexicon FirstPersonLexicon::Default() {
  return FirstPersonLexicon(
      {"i", "me", "my", "mine", "myself", "i'm", "i've", "i'll", "i'd"});
}

FirstPersonLexicon::FirstPersonLexicon(std::set<std::string> words) {
  for (const std::string& w : words) {
    std::string lowered;
    lowered.reserve(w.size());
    for (char c : w) lowered.push_back(AsciiLower(c));
    if (!lowered.empty()) words_.insert(std::move(lowered));
  }
  if (words_.empty()) {
    throw InvalidArgument("first-person lexicon must not be empty");
  }
}

FirstPersonLexicon FirstPersonLexicon::FromStream(std::istream& in) {
  std::set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    const auto begin = line.find_first_not_of(" \t\r");
    if (begin == std::string::npos || line[begin] == '#') continue;
    const auto end = line.find_last_not_of(" \t\r");
    words.insert(line.substr(begin, end - begin + 1));
  }
  return FirstPersonLexicon(std::move(words));
}

FirstPersonLexicon FirstPersonLexicon::FromFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open lexicon file: " + path);
  return FromStream(in);
}

bool FirstPersonLexicon::Contains(std::string_view token) const {
  return words_.find(token) != words_.end();
}

bool ObjectiveVoice(const TokenSeq& response, const FirstPersonLexicon& lexicon) {
  for (const std::string& tok : response.tokens) {
    if (lexicon.Contains(tok)) return false;
  }
  return true;
}

LexOverlap LexicalOverlap(const TokenSeq& response, const TokenSeq& evidence) {
  LexOverlap out;
  out.response_len = response.size();
  out.evidence_len = evidence.size();

  const std::unordered_set<std::string_view> evidence_types(
      evidence.tokens.begin(), evidence.tokens.end());
  const std::unordered_set<std::string_view> response_types(
      response.tokens.begin(), response.tokens.end());

  for (const std::string& tok : response.tokens) {
    if (evidence_types.count(tok) > 0) ++out.matched_response_tokens;
  }
  std::size_t matched_evidence = 0;
  for (const std::string& tok : evidence.tokens) {
    if (response_types.count(tok) > 0) ++matched_evidence;
  }

  if (out.response_len > 0) {
    out.precision = static_cast<double>(out.matched_response_tokens) /
                    static_cast<double>(out.response_len);
  }
  out.recall = out.evidence_len == 0
                   ? 1.0
                   : static_cast<double>(matched_evidence) /
                         static_cast<double>(out.evidence_len);
  return out;
}

}  // namespace faithctl::text
