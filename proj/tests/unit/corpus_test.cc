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

#include "faithctl/corpus.h"

#include <fstream>
#include <sstream>

#include "faithctl/errors.h"
#include "gtest/gtest.h"
#include "json.hpp"
#include "support/test_paths.h"

namespace faithctl::corpus {
namespace {

using nlohmann::json;

GroundedExample MakeExample(std::vector<Turn> history, std::string evidence = "E",
                            std::string response = "r") {
  GroundedExample ex;
  ex.id = "x";
  ex.topic = "t";
  ex.history = std::move(history);
  ex.evidence = std::move(evidence);
  ex.response = std::move(response);
  return ex;
}

constexpr char kLine[] =
    R"({"id":"d1-1","topic":"Pug","split":"train","history":[)"
    R"({"speaker":"apprentice","text":"hi"},{"speaker":"wizard","text":"hello"},)"
    R"({"speaker":"apprentice","text":"pugs?"}],"evidence":"The pug is a dog.",)"
    R"("response":"The pug is a dog breed."})";

TEST(IngestTest, OneCanonicalLine) {
  std::istringstream in(kLine);
  const auto examples = Ingest(in, Format::kCanonical);
  ASSERT_EQ(examples.size(), 1u);
  EXPECT_EQ(examples[0].history.size(), 3u);
  EXPECT_EQ(examples[0].history[1].speaker, Speaker::kWizard);
  EXPECT_EQ(examples[0].split, Split::kTrain);
}

TEST(IngestTest, EmptyStream) {
  std::istringstream in("");
  EXPECT_TRUE(Ingest(in, Format::kCanonical).empty());
  std::istringstream blank("\n\n  \n");
  EXPECT_TRUE(Ingest(blank, Format::kCanonical).empty());
}

TEST(IngestTest, CanonicalRoundTrip) {
  std::istringstream in(kLine);
  const auto examples = Ingest(in, Format::kCanonical);
  EXPECT_EQ(ToCanonicalJson(examples[0]), kLine);
}

TEST(IngestTest, MalformedLineCarriesLineNumber) {
  std::istringstream in(std::string(kLine) + "\n\n{not json\n");
  try {
    Ingest(in, Format::kCanonical);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
}

TEST(IngestTest, UnknownSpeakerIsRecordError) {
  std::string bad = kLine;
  bad.replace(bad.find("wizard"), 6, "oracle");
  std::istringstream in(std::string(kLine) + "\n" + bad + "\n");
  try {
    Ingest(in, Format::kCanonical);
    FAIL();
  } catch (const RecordError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(IngestTest, SkipBadRecordsWarns) {
  std::string bad = kLine;
  bad.replace(bad.find("wizard"), 6, "oracle");
  std::istringstream in(std::string(kLine) + "\n" + bad + "\n{broken\n" + kLine + "\n");
  std::vector<std::string> warnings;
  IngestOptions opts;
  opts.skip_bad_records = true;
  opts.on_warning = [&](const std::string& w) { warnings.push_back(w); };
  EXPECT_EQ(Ingest(in, Format::kCanonical, opts).size(), 2u);
  ASSERT_EQ(warnings.size(), 2u);
  EXPECT_NE(warnings[0].find("line 2"), std::string::npos);
  EXPECT_NE(warnings[1].find("line 3"), std::string::npos);
}

TEST(IngestTest, InvalidRecordsRejected) {
  const std::vector<std::string> bad = {
      R"({"id":"a","topic":"t","split":"train","history":[],"evidence":"e","response":"r"})",
      R"({"id":"a","topic":"t","split":"train","history":[{"speaker":"wizard","text":"x"}],"evidence":"e","response":"r"})",
      R"({"id":"a","topic":"t","split":"train","history":[{"speaker":"apprentice","text":"x"}],"evidence":" ","response":"r"})",
      R"({"id":"a","topic":"t","split":"valid","history":[{"speaker":"apprentice","text":"x"}],"evidence":"e","response":"r"})",
      R"({"id":"a","topic":"t","split":"train","history":[{"speaker":"apprentice","text":"  "}],"evidence":"e","response":"r"})",
      R"({"topic":"t","split":"train","history":[{"speaker":"apprentice","text":"x"}],"evidence":"e","response":"r"})",
      R"([1,2,3])",
  };
  for (const std::string& line : bad) {
    std::istringstream in(line);
    EXPECT_THROW(Ingest(in, Format::kCanonical), RecordError) << line;
  }
}

TEST(ExtractExamplesTest, AlternatingTurns) {
  const std::vector<DialogueTurn> d = {{{Speaker::kApprentice, "a1"}, std::nullopt},
                                       {{Speaker::kWizard, "w1"}, "e1"},
                                       {{Speaker::kApprentice, "a2"}, std::nullopt},
                                       {{Speaker::kWizard, "w2"}, "e2"}};
  const auto ex = ExtractExamples(d, {"dlg", "Topic", Split::kTestSeen});
  ASSERT_EQ(ex.size(), 2u);
  EXPECT_EQ(ex[0].history.size(), 1u);
  EXPECT_EQ(ex[1].history.size(), 3u);
  EXPECT_EQ(ex[1].response, "w2");
  EXPECT_EQ(ex[1].evidence, "e2");
  EXPECT_EQ(ex[1].split, Split::kTestSeen);
  EXPECT_NE(ex[0].id, ex[1].id);
}

TEST(ExtractExamplesTest, OpeningWizardTurnDropped) {
  const std::vector<DialogueTurn> d = {{{Speaker::kWizard, "w0"}, "e0"},
                                       {{Speaker::kApprentice, "a1"}, std::nullopt},
                                       {{Speaker::kWizard, "w1"}, "e1"}};
  const auto ex = ExtractExamples(d, {"dlg", "T", Split::kTrain});
  ASSERT_EQ(ex.size(), 1u);
  EXPECT_EQ(ex[0].response, "w1");
  EXPECT_EQ(ex[0].history.size(), 2u);
}

TEST(ExtractExamplesTest, ConsecutiveWizardTurnDropped) {
  const std::vector<DialogueTurn> d = {{{Speaker::kApprentice, "a1"}, std::nullopt},
                                       {{Speaker::kWizard, "w1"}, "e1"},
                                       {{Speaker::kWizard, "w2"}, "e2"}};
  const auto ex = ExtractExamples(d, {"dlg", "T", Split::kTrain});
  ASSERT_EQ(ex.size(), 1u);
  EXPECT_EQ(ex[0].response, "w1");
}

TEST(ExtractExamplesTest, WizardTurnWithoutEvidenceDropped) {
  const std::vector<DialogueTurn> d = {{{Speaker::kApprentice, "a1"}, std::nullopt},
                                       {{Speaker::kWizard, "w1"}, std::nullopt}};
  EXPECT_TRUE(ExtractExamples(d, {"dlg", "T", Split::kTrain}).empty());
}

TEST(NativeIngestTest, BundledSample) {
  std::ifstream in(testing::DataPath("native_sample.json"));
  ASSERT_TRUE(in);
  IngestOptions opts;
  opts.native_split = Split::kDevUnseen;
  const auto ex = Ingest(in, Format::kNativeDataset, opts);
  // 3 dialogues x 3 wizard turns, one of which used no passage.
  ASSERT_EQ(ex.size(), 8u);
  for (const auto& e : ex) {
    EXPECT_EQ(e.split, Split::kDevUnseen);
    EXPECT_EQ(e.history.back().speaker, Speaker::kApprentice);
    EXPECT_FALSE(e.evidence.empty());
  }
  EXPECT_EQ(ex[0].topic, "Lighthouse");
}

TEST(NativeIngestTest, JsonLinesOfDialogues) {
  const std::string d1 =
      R"({"chosen_topic":"Tea","dialog":[{"speaker":"1_Apprentice","text":"tea?"},)"
      R"({"speaker":"0_Wizard","text":"Tea is a drink.","checked_sentence":{"Tea_0":"Tea is a drink made from leaves."}}]})";
  std::istringstream in(d1 + "\n" + d1 + "\n");
  const auto ex = Ingest(in, Format::kNativeDataset);
  ASSERT_EQ(ex.size(), 2u);
  EXPECT_EQ(ex[0].evidence, "Tea is a drink made from leaves.");
  EXPECT_NE(ex[0].id, ex[1].id);
}

TEST(NativeIngestTest, UnknownSpeakerIsRecordErrorUnlessSkipped) {
  const std::string good =
      R"({"chosen_topic":"Tea","dialog":[{"speaker":"1_Apprentice","text":"tea?"},)"
      R"({"speaker":"0_Wizard","text":"Tea.","checked_sentence":{"k":"Tea is a drink."}}]})";
  const std::string bad =
      R"({"chosen_topic":"Tea","dialog":[{"speaker":"2_Narrator","text":"x"}]})";
  std::istringstream in(good + "\n" + bad + "\n");
  EXPECT_THROW(Ingest(in, Format::kNativeDataset), RecordError);
  std::istringstream again(good + "\n" + bad + "\n");
  IngestOptions opts;
  opts.skip_bad_records = true;
  int warnings = 0;
  opts.on_warning = [&](const std::string&) { ++warnings; };
  EXPECT_EQ(Ingest(again, Format::kNativeDataset, opts).size(), 1u);
  EXPECT_EQ(warnings, 1);
}

TEST(SerializeInputTest, WithAndWithoutCodes) {
  const auto ex = MakeExample({{Speaker::kApprentice, "hi"}});
  EXPECT_EQ(SerializeInput(ex, control::DecodeCodes()),
            "<no-first-person> <high-prec> <entailed> evidence: E <speaker1> hi");
  EXPECT_EQ(SerializeInput(ex, std::nullopt), "evidence: E <speaker1> hi");
}

TEST(SerializeInputTest, SpeakerTokensAndWhitespaceCollapse) {
  const auto ex = MakeExample({{Speaker::kApprentice, "a  b"},
                               {Speaker::kWizard, "c\td"},
                               {Speaker::kApprentice, "e"}},
                              "ev  1");
  EXPECT_EQ(SerializeInput(ex, std::nullopt),
            "evidence: ev 1 <speaker1> a b <speaker2> c d <speaker1> e");
}

TEST(SerializeInputTest, DropsOldestTurnsToFitBudget) {
  // head: "evidence: E" = 2 tokens; turns are 3, 3 and 3 tokens.
  const auto ex = MakeExample({{Speaker::kApprentice, "one two"},
                               {Speaker::kWizard, "three four"},
                               {Speaker::kApprentice, "five six"}});
  EXPECT_EQ(CountWhitespaceTokens(SerializeInput(ex, std::nullopt, 11)), 11u);
  EXPECT_EQ(SerializeInput(ex, std::nullopt, 10), "evidence: E <speaker2> three four <speaker1> five six");
  EXPECT_EQ(SerializeInput(ex, std::nullopt, 7), "evidence: E <speaker1> five six");
  EXPECT_EQ(SerializeInput(ex, std::nullopt, 5), "evidence: E <speaker1> five six");
  EXPECT_THROW(SerializeInput(ex, std::nullopt, 4), InvalidArgument);
}

TEST(SerializeInputTest, EvidenceNeverTruncated) {
  const auto ex = MakeExample({{Speaker::kApprentice, "q"}}, "a b c d e f g h");
  try {
    SerializeInput(ex, control::DecodeCodes(), 10);
    FAIL();
  } catch (const InvalidArgument& e) {
    EXPECT_NE(std::string(e.what()).find("input too long"), std::string::npos);
  }
}

TEST(CorpusStatsTest, Fractions) {
  const nli::HeuristicJudge judge(0.8);
  auto a = MakeExample({{Speaker::kApprentice, "q"}}, "The pug is a dog.", "I love my pug.");
  auto b = MakeExample({{Speaker::kApprentice, "q"}}, "The pug is a dog.", "The pug is a dog.");
  b.split = Split::kTestSeen;
  const CorpusStats s = ComputeCorpusStats({a, b}, judge);
  EXPECT_EQ(s.n_examples, 2u);
  EXPECT_DOUBLE_EQ(s.pct_first_person, 0.5);
  EXPECT_DOUBLE_EQ(s.pct_entailed, 0.5);
  EXPECT_EQ(s.per_split.at(Split::kTrain), 1u);
  EXPECT_EQ(s.per_split.at(Split::kTestSeen), 1u);
  EXPECT_THROW(ComputeCorpusStats({}, judge), InvalidArgument);
}

TEST(CorpusStatsTest, IdentityCorpusHasFullPrecision) {
  const nli::HeuristicJudge judge(0.8);
  std::vector<GroundedExample> ex;
  for (const char* s : {"Tea is a drink.", "Chess has 64 squares.", "Ice floats."}) {
    ex.push_back(MakeExample({{Speaker::kApprentice, "q"}}, s, s));
  }
  const CorpusStats st = ComputeCorpusStats(ex, judge);
  EXPECT_DOUBLE_EQ(st.mean_lex_precision, 1.0);
  EXPECT_DOUBLE_EQ(st.pct_entailed, 1.0);
  EXPECT_DOUBLE_EQ(st.pct_first_person, 0.0);
}

TEST(CorpusStatsTest, MiniCorpusMatchesFrozenExpectation) {
  std::ifstream in(testing::DataPath("mini_corpus.jsonl"));
  const auto examples = Ingest(in, Format::kCanonical);
  std::ifstream expected_in(testing::DataPath("mini_corpus_expected.json"));
  const json expected = json::parse(expected_in);
  const CorpusStats s = ComputeCorpusStats(examples, nli::HeuristicJudge(0.8));
  EXPECT_EQ(s.n_examples, expected["n_examples"].get<std::size_t>());
  EXPECT_NEAR(s.pct_first_person, expected["pct_first_person"].get<double>(), 1e-12);
  EXPECT_NEAR(s.mean_lex_precision, expected["mean_lex_precision"].get<double>(), 1e-12);
  EXPECT_NEAR(s.pct_entailed, expected["pct_entailed"].get<double>(), 1e-12);
  for (const auto& [name, count] : expected["per_split"].items()) {
    EXPECT_EQ(s.per_split.at(*ParseSplit(name)), count.get<std::size_t>()) << name;
  }
}

}  // namespace
}  // namespace faithctl::corpus
