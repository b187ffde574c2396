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

#include <random>
#include <sstream>

#include "faithctl/errors.h"
#include "gtest/gtest.h"
#include "support/oracles.h"

namespace faithctl::text {
namespace {

using Tokens = std::vector<std::string>;

TEST(TokenizeTest, LowercasesAndKeepsContractions) {
  EXPECT_EQ(Tokenize("I'm Happy!").tokens, (Tokens{"i'm", "happy"}));
}

TEST(TokenizeTest, EmptyInput) { EXPECT_TRUE(Tokenize("").empty()); }

TEST(TokenizeTest, HyphensSplit) {
  EXPECT_EQ(Tokenize("co-op 2-in-1").tokens, (Tokens{"co", "op", "2", "in", "1"}));
}

TEST(TokenizeTest, ApostropheOnlyBetweenWordCharacters) {
  EXPECT_EQ(Tokenize("'quoted' dogs' rock'n'roll").tokens,
            (Tokens{"quoted", "dogs", "rock'n'roll"}));
  EXPECT_EQ(Tokenize("a''b").tokens, (Tokens{"a", "b"}));
}

TEST(TokenizeTest, TypographicApostropheNormalized) {
  EXPECT_EQ(Tokenize("I’ve").tokens, (Tokens{"i've"}));
}

TEST(TokenizeTest, UnicodePunctuationSeparates) {
  // em dash, ellipsis, guillemets, ideographic full stop
  EXPECT_EQ(Tokenize("one—two…three «four» five。six").tokens,
            (Tokens{"one", "two", "three", "four", "five", "six"}));
}

TEST(TokenizeTest, NonAsciiLettersAreWordCharacters) {
  EXPECT_EQ(Tokenize("Café naïve 東京").tokens,
            (Tokens{"café", "naïve", "東京"}));
}

TEST(TokenizeTest, InvalidUtf8ActsAsSeparator) {
  EXPECT_EQ(Tokenize(std::string("ab\xff" "cd")).tokens, (Tokens{"ab", "cd"}));
  EXPECT_EQ(Tokenize(std::string("ab\xc3")).tokens, (Tokens{"ab"}));
}

TEST(TokenizeTest, JoinRoundTrips) {
  const TokenSeq t = Tokenize("The quick, brown fox -- isn't it?");
  EXPECT_EQ(Tokenize(Join(t)), t);
}

TEST(ObjectiveVoiceTest, Examples) {
  const auto lex = FirstPersonLexicon::Default();
  EXPECT_FALSE(ObjectiveVoice(TokenSeq{{"i", "love", "dogs"}}, lex));
  EXPECT_TRUE(ObjectiveVoice(TokenSeq{{"the", "pug", "is", "a", "breed"}}, lex));
  EXPECT_FALSE(ObjectiveVoice(TokenSeq{{"they", "told", "me", "about", "it"}}, lex));
  EXPECT_TRUE(ObjectiveVoice(TokenSeq{}, lex));
}

TEST(LexiconTest, FromStreamSkipsCommentsAndBlanks) {
  std::istringstream in("# custom\n\nWe\n  us \nour\n");
  const auto lex = FirstPersonLexicon::FromStream(in);
  EXPECT_EQ(lex.words().size(), 3u);
  EXPECT_TRUE(lex.Contains("we"));
  EXPECT_TRUE(lex.Contains("us"));
  EXPECT_FALSE(lex.Contains("i"));
}

TEST(LexiconTest, EmptyLexiconRejected) {
  std::istringstream in("# nothing here\n\n");
  EXPECT_THROW(FirstPersonLexicon::FromStream(in), InvalidArgument);
  EXPECT_THROW(FirstPersonLexicon::FromFile("/nonexistent/lexicon.txt"), InvalidArgument);
}

TEST(LexicalOverlapTest, HandCountedExample) {
  const LexOverlap o = LexicalOverlap(TokenSeq{{"the", "sky", "is", "blue", "today"}},
                                      TokenSeq{{"the", "sky", "was", "blue", "yesterday"}});
  EXPECT_DOUBLE_EQ(o.precision, 0.6);
  EXPECT_DOUBLE_EQ(o.recall, 0.6);
  EXPECT_EQ(o.matched_response_tokens, 3u);
}

TEST(LexicalOverlapTest, IdentityAndDisjoint) {
  const TokenSeq a{{"x", "y", "z"}};
  EXPECT_DOUBLE_EQ(LexicalOverlap(a, a).precision, 1.0);
  EXPECT_DOUBLE_EQ(LexicalOverlap(a, a).recall, 1.0);
  const LexOverlap d = LexicalOverlap(a, TokenSeq{{"p", "q"}});
  EXPECT_DOUBLE_EQ(d.precision, 0.0);
  EXPECT_DOUBLE_EQ(d.recall, 0.0);
}

TEST(LexicalOverlapTest, EmptySides) {
  EXPECT_DOUBLE_EQ(LexicalOverlap(TokenSeq{}, TokenSeq{{"a"}}).precision, 0.0);
  const LexOverlap e = LexicalOverlap(TokenSeq{{"a"}}, TokenSeq{});
  EXPECT_DOUBLE_EQ(e.precision, 0.0);
  EXPECT_DOUBLE_EQ(e.recall, 1.0);
}

TEST(LexicalOverlapTest, CountsOccurrencesNotTypes) {
  const LexOverlap o = LexicalOverlap(TokenSeq{{"a", "a", "a", "b"}}, TokenSeq{{"a", "c"}});
  EXPECT_DOUBLE_EQ(o.precision, 0.75);
  EXPECT_DOUBLE_EQ(o.recall, 0.5);
}

// Random token sequences over a small vocabulary, checked against the
// nested-loop oracle; also checks the [0,1] range and identity invariants.
TEST(LexicalOverlapProperty, MatchesBruteForceOracle) {
  std::mt19937_64 rng(42);
  const Tokens vocab = {"a", "b", "c", "d", "e", "f", "g", "i", "me"};
  auto draw = [&](std::size_t max_len) {
    Tokens t(rng() % (max_len + 1));
    for (auto& s : t) s = vocab[rng() % vocab.size()];
    return t;
  };
  for (int trial = 0; trial < 2000; ++trial) {
    const Tokens r = draw(12);
    const Tokens e = draw(12);
    const LexOverlap got = LexicalOverlap(TokenSeq{r}, TokenSeq{e});
    const auto want = testing::BruteForceOverlap(r, e);
    ASSERT_EQ(got.precision, want.precision);
    ASSERT_EQ(got.recall, want.recall);
    ASSERT_GE(got.precision, 0.0);
    ASSERT_LE(got.precision, 1.0);
    if (!r.empty()) {
      ASSERT_EQ(LexicalOverlap(TokenSeq{r}, TokenSeq{r}).precision, 1.0);
    }
    ASSERT_EQ(ObjectiveVoice(TokenSeq{r}, FirstPersonLexicon::Default()),
              testing::BruteForceObjective(r, {"i", "me", "my", "mine", "myself", "i'm",
                                               "i've", "i'll", "i'd"}));
  }
}

TEST(TokenizeProperty, AsciiAgreesWithOracle) {
  std::mt19937_64 rng(7);
  const std::string alphabet = "abcXYZ019 '.,-!?\"()";
  for (int trial = 0; trial < 2000; ++trial) {
    std::string s(rng() % 30, ' ');
    for (char& c : s) c = alphabet[rng() % alphabet.size()];
    ASSERT_EQ(Tokenize(s).tokens, testing::AsciiTokenize(s)) << "input: " << s;
  }
}

}  // namespace
}  // namespace faithctl::text
