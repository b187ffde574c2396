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

#ifndef FAITHCTL_TEXTMEASURES_H_
#define FAITHCTL_TEXTMEASURES_H_

#include <cstddef>
#include <istream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace faithctl::text {

// Ordered lowercase word tokens. Every token is non-empty and made of
// alphanumerics (ASCII or non-ASCII word characters) with apostrophes only
// between them.
struct TokenSeq {
  std::vector<std::string> tokens;

  std::size_t size() const { return tokens.size(); }
  bool empty() const { return tokens.empty(); }
  bool operator==(const TokenSeq&) const = default;
};

// Lowercases and splits on every character that is not alphanumeric or an
// apostrophe. Apostrophes (ASCII ' or U+2019, normalized to ') survive only
// between two word characters. Code points outside ASCII count as word
// characters except for Latin-1 punctuation and the General Punctuation block.
TokenSeq Tokenize(std::string_view text);

// Tokens joined with single spaces. Tokenize(Join(t)) == t.
std::string Join(const TokenSeq& seq);

class FirstPersonLexicon {
 public:
  // {i, me, my, mine, myself, i'm, i've, i'll, i'd}
  static FirstPersonLexicon Default();

  // Throws InvalidArgument when `words` is empty. Words are lowercased.
  explicit FirstPersonLexicon(std::set<std::string> words);

  // One token per line; blank lines and lines starting with '#' are ignored.
  static FirstPersonLexicon FromStream(std::istream& in);
  static FirstPersonLexicon FromFile(const std::string& path);

  bool Contains(std::string_view token) const;
  const std::set<std::string, std::less<>>& words() const { return words_; }

 private:
  std::set<std::string, std::less<>> words_;
};

// True when no token of `response` is in the lexicon.
bool ObjectiveVoice(const TokenSeq& response, const FirstPersonLexicon& lexicon);

struct LexOverlap {
  double precision = 0.0;
  double recall = 0.0;
  std::size_t matched_response_tokens = 0;
  std::size_t response_len = 0;
  std::size_t evidence_len = 0;
};

// Occurrence-level unigram overlap. Precision counts response occurrences
// whose type appears anywhere in the evidence; recall counts evidence
// occurrences whose type appears anywhere in the response. An empty response
// scores precision 0; an empty evidence scores recall 1.
LexOverlap LexicalOverlap(const TokenSeq& response, const TokenSeq& evidence);

}  // namespace faithctl::text

#endif  // FAITHCTL_TEXTMEASURES_H_
