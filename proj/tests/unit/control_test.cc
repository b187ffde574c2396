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

#include "faithctl/control.h"

#include <random>
#include <sstream>

#include "faithctl/errors.h"
#include "gtest/gtest.h"
#include "json.hpp"

namespace faithctl::control {
namespace {

using corpus::GroundedExample;
using corpus::Speaker;
using nlohmann::json;

GroundedExample Example(std::string id, std::string evidence, std::string response,
                        corpus::Split split = corpus::Split::kTrain) {
  GroundedExample ex;
  ex.id = std::move(id);
  ex.topic = "t";
  ex.split = split;
  ex.history = {{Speaker::kApprentice, "tell me more"}};
  ex.evidence = std::move(evidence);
  ex.response = std::move(response);
  return ex;
}

MeasureReport Report(bool objective, double precision, bool entailed) {
  MeasureReport r;
  r.objective_voice = objective;
  r.overlap.precision = precision;
  r.entailment.entailed = entailed;
  return r;
}

TEST(CodesTest, TokensAndParsing) {
  EXPECT_EQ(Token(VoiceCode::kFirstPerson), "<first-person>");
  EXPECT_EQ(Token(PrecisionCode::kMed), "<med-prec>");
  EXPECT_EQ(Token(EntailCode::kNonEntailed), "<non-entailed>");
  EXPECT_EQ(ParsePrecisionCode("<low-prec>"), PrecisionCode::kLow);
  EXPECT_FALSE(ParseVoiceCode("<first_person>").has_value());
  EXPECT_EQ(ParseEntailCode("<entailed>"), EntailCode::kEntailed);
}

TEST(CodesTest, DecodeCodes) {
  EXPECT_EQ(DecodeCodes().Prefix(), "<no-first-person> <high-prec> <entailed>");
}

TEST(FitTercilesTest, NineValues) {
  const auto b = FitTerciles({0.8, 0.0, 0.5, 0.1, 0.7, 0.2, 0.6, 0.3, 0.4});
  EXPECT_DOUBLE_EQ(b.t_low, 0.2);
  EXPECT_DOUBLE_EQ(b.t_high, 0.5);
  EXPECT_EQ(b.n_fitted, 9u);
}

TEST(FitTercilesTest, Degenerate) {
  const auto b = FitTerciles({0.5, 0.5, 0.5, 0.5});
  EXPECT_DOUBLE_EQ(b.t_low, 0.5);
  EXPECT_DOUBLE_EQ(b.t_high, 0.5);
  const auto c = FitTerciles({0, 1, 1});
  EXPECT_DOUBLE_EQ(c.t_low, 0.0);
  EXPECT_DOUBLE_EQ(c.t_high, 1.0);
}

TEST(FitTercilesTest, Errors) {
  EXPECT_THROW(FitTerciles({0.1, 0.2}), InvalidArgument);
  EXPECT_THROW(FitTerciles({}), InvalidArgument);
  EXPECT_THROW(FitTerciles({0.1, 0.2, 1.5}), InvalidArgument);
}

TEST(AssignPrecisionCodeTest, BoundaryRule) {
  const TercileBoundaries b{0.2, 0.5, 9};
  EXPECT_EQ(AssignPrecisionCode(0.2, b), PrecisionCode::kLow);
  EXPECT_EQ(AssignPrecisionCode(0.21, b), PrecisionCode::kMed);
  EXPECT_EQ(AssignPrecisionCode(0.5, b), PrecisionCode::kMed);
  EXPECT_EQ(AssignPrecisionCode(0.51, b), PrecisionCode::kHigh);
  EXPECT_EQ(AssignPrecisionCode(1.0, {0.5, 0.5, 4}), PrecisionCode::kHigh);
}

TEST(AssignPrecisionCodeTest, TopTercileTiedAtOneHasNoHighBucket) {
  // Over a third of the values at 1.0 puts t_high at 1.0; nothing exceeds it.
  const auto b = FitTerciles({0.2, 0.4, 0.6, 1.0, 1.0, 1.0, 1.0});
  EXPECT_DOUBLE_EQ(b.t_high, 1.0);
  EXPECT_EQ(AssignPrecisionCode(1.0, b), PrecisionCode::kMed);
}

TEST(AssignCodesTest, Examples) {
  const TercileBoundaries b{0.2, 0.5, 9};
  EXPECT_EQ(AssignCodes(Report(true, 0.9, true), b), DecodeCodes());
  EXPECT_EQ(AssignCodes(Report(false, 0.1, false), b),
            (ControlCodes{VoiceCode::kFirstPerson, PrecisionCode::kLow, EntailCode::kNonEntailed}));
  EXPECT_EQ(AssignCodes(Report(true, 0.3, false), b),
            (ControlCodes{VoiceCode::kNoFirstPerson, PrecisionCode::kMed,
                          EntailCode::kNonEntailed}));
}

TEST(TercileProperty, SizesWithinOneOfAThird) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 3 + rng() % 300;
    std::set<double> distinct;
    while (distinct.size() < n) distinct.insert(static_cast<double>(rng() % 1000003) / 1000003.0);
    std::vector<double> values(distinct.begin(), distinct.end());
    std::shuffle(values.begin(), values.end(), rng);
    const auto b = FitTerciles(values);
    ASSERT_LE(b.t_low, b.t_high);
    std::size_t counts[3] = {0, 0, 0};
    for (double v : values) ++counts[static_cast<int>(AssignPrecisionCode(v, b))];
    for (std::size_t c : counts) {
      ASSERT_LE(std::abs(static_cast<double>(c) - static_cast<double>(n) / 3.0), 1.0)
          << "n=" << n;
    }
  }
}

TEST(BoundariesJsonTest, RoundTripAndValidation) {
  const TercileBoundaries b{0.25, 0.75, 12};
  EXPECT_EQ(BoundariesFromJson(BoundariesToJson(b)), b);
  EXPECT_THROW(BoundariesFromJson(R"({"t_low":0.8,"t_high":0.2,"n_fitted":3})"), Error);
  EXPECT_THROW(BoundariesFromJson(R"({"t_low":0.1})"), Error);
  EXPECT_THROW(BoundariesFromJson("nope"), Error);
  EXPECT_THROW(ReadBoundariesFile("/nonexistent/b.json"), Error);
}

TEST(MeasureTest, CombinesMeasures) {
  nli::EntailmentVerdict v;
  v.entailed = true;
  const MeasureReport r =
      Measure("The pug is small", "the pug is a small dog", v, text::FirstPersonLexicon::Default());
  EXPECT_TRUE(r.objective_voice);
  EXPECT_DOUBLE_EQ(r.overlap.precision, 1.0);
  EXPECT_TRUE(r.entailment.entailed);
}

TEST(AnnotationTest, JsonRoundTrip) {
  Annotation a{"ex-1", corpus::Split::kDevSeen, Report(false, 0.25, true)};
  a.report.overlap.recall = 0.5;
  a.report.entailment.score = 0.9;
  const std::string line = AnnotationToJson(a);
  const json obj = json::parse(line);
  EXPECT_EQ(obj["id"], "ex-1");
  EXPECT_EQ(obj["split"], "dev_seen");
  EXPECT_EQ(obj["measures"]["objective_voice"], false);
  const Annotation back = ParseAnnotation(line, 1);
  EXPECT_EQ(back.id, "ex-1");
  EXPECT_EQ(back.split, corpus::Split::kDevSeen);
  EXPECT_EQ(back.report.objective_voice, false);
  EXPECT_DOUBLE_EQ(back.report.overlap.precision, 0.25);
  EXPECT_DOUBLE_EQ(back.report.overlap.recall, 0.5);
  EXPECT_TRUE(back.report.entailment.entailed);
  EXPECT_THROW(ParseAnnotation("{", 4), ParseError);
  EXPECT_THROW(ParseAnnotation(R"({"id":"x"})", 4), RecordError);
}

TEST(AugmentTest, IdentityResponseGetsDecodeCodes) {
  const nli::HeuristicJudge judge(0.8);
  const auto ex = Example("a", "The pug is a dog.", "The pug is a dog.");
  const AugmentResult r = Augment({ex}, judge, TercileBoundaries{0.2, 0.5, 9});
  ASSERT_EQ(r.records.size(), 1u);
  const json rec = json::parse(r.records[0]);
  EXPECT_EQ(rec["codes"], json({"<no-first-person>", "<high-prec>", "<entailed>"}));
  EXPECT_EQ(rec["id"], "a");
  EXPECT_EQ(rec["target"], "The pug is a dog.");
  EXPECT_EQ(rec["input"].get<std::string>().rfind("<no-first-person> <high-prec> <entailed> evidence:", 0), 0u);
}

TEST(AugmentTest, EmptyInputCannotFitBoundaries) {
  const nli::HeuristicJudge judge(0.8);
  EXPECT_THROW(Augment({}, judge, std::nullopt), InvalidArgument);
}

TEST(AugmentTest, NineExamplesSplitIntoThirds) {
  const nli::HeuristicJudge judge(0.8);
  // Ten evidence tokens; response k copies k of them and pads with unseen
  // words so that precision is k/10 for k = 0..8.
  const std::string evidence = "e0 e1 e2 e3 e4 e5 e6 e7 e8 e9";
  std::vector<GroundedExample> examples;
  for (int k = 0; k <= 8; ++k) {
    std::string resp;
    for (int i = 0; i < 10; ++i) resp += (i < k ? "e" : "x") + std::to_string(i) + " ";
    examples.push_back(Example("ex" + std::to_string(k), evidence, resp));
  }
  const AugmentResult r = Augment(examples, judge, std::nullopt);
  EXPECT_DOUBLE_EQ(r.boundaries.t_low, 0.2);
  EXPECT_DOUBLE_EQ(r.boundaries.t_high, 0.5);
  std::map<std::string, int> counts;
  for (const std::string& rec : r.records) ++counts[json::parse(rec)["codes"][1]];
  EXPECT_EQ(counts["<low-prec>"], 3);
  EXPECT_EQ(counts["<med-prec>"], 3);
  EXPECT_EQ(counts["<high-prec>"], 3);
}

TEST(AugmentTest, FittingRequiresTrainingSplit) {
  const nli::HeuristicJudge judge(0.8);
  std::vector<GroundedExample> ex = {Example("a", "x y", "x"), Example("b", "x y", "y"),
                                     Example("c", "x y", "z", corpus::Split::kTestSeen)};
  EXPECT_THROW(Augment(ex, judge, std::nullopt), InvalidArgument);
  EXPECT_NO_THROW(Augment(ex, judge, TercileBoundaries{0.2, 0.5, 3}));
}

TEST(FilterTest, KeepsFaithfulInOrder) {
  const nli::HeuristicJudge judge(0.8);
  const std::string ev = "The pug is a small dog breed from China.";
  std::vector<GroundedExample> ex;
  for (int i = 0; i < 10; ++i) {
    std::string resp = i == 3 || i == 7 ? "The pug is a small dog breed." : "I love my pug!";
    if (i == 5) resp = "The pug is a tiny cat.";
    ex.push_back(Example("ex" + std::to_string(i), ev, resp));
  }
  const auto kept = FilterFaithful(ex, judge, TercileBoundaries{0.2, 0.5, 9});
  ASSERT_EQ(kept.size(), 2u);
  EXPECT_EQ(kept[0].id, "ex3");
  EXPECT_EQ(kept[1].id, "ex7");
}

TEST(FilterTest, FirstPersonCorpusIsEmpty) {
  const nli::HeuristicJudge judge(0.0);
  std::vector<GroundedExample> ex = {Example("a", "I like my dog", "I like my dog"),
                                     Example("b", "me and my dog", "me and my dog")};
  EXPECT_TRUE(FilterFaithful(ex, judge, TercileBoundaries{0.0, 0.0, 3}).empty());
}

TEST(AnnotateAllTest, ParallelMatchesSequential) {
  const nli::HeuristicJudge judge(0.8);
  std::vector<GroundedExample> ex;
  for (int i = 0; i < 50; ++i) {
    ex.push_back(Example("e" + std::to_string(i), "alpha beta gamma delta " + std::to_string(i),
                         i % 3 ? "alpha beta" : "I saw gamma " + std::to_string(i * 7)));
  }
  const auto lex = text::FirstPersonLexicon::Default();
  const auto seq = AnnotateAll(ex, judge, lex, 1);
  const auto par = AnnotateAll(ex, judge, lex, 4);
  ASSERT_EQ(seq.size(), par.size());
  for (std::size_t i = 0; i < seq.size(); ++i) {
    EXPECT_EQ(MeasuresToJson(seq[i]), MeasuresToJson(par[i]));
  }
}

}  // namespace
}  // namespace faithctl::control
