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

#include <algorithm>
#include <fstream>
#include <iterator>
#include <sstream>

#include "faithctl/errors.h"
#include "faithctl/parallel.h"
#include "json.hpp"

namespace faithctl::control {

using nlohmann::json;

std::string_view Token(VoiceCode code) {
  return code == VoiceCode::kFirstPerson ? "<first-person>" : "<no-first-person>";
}

std::string_view Token(PrecisionCode code) {
  switch (code) {
    case PrecisionCode::kLow:
      return "<low-prec>";
    case PrecisionCode::kMed:
      return "<med-prec>";
    case PrecisionCode::kHigh:
      return "<high-prec>";
  }
  return "<low-prec>";
}

std::string_view Token(EntailCode code) {
  return code == EntailCode::kEntailed ? "<entailed>" : "<non-entailed>";
}

std::optional<VoiceCode> ParseVoiceCode(std::string_view token) {
  for (VoiceCode c : {VoiceCode::kFirstPerson, VoiceCode::kNoFirstPerson}) {
    if (Token(c) == token) return c;
  }
  return std::nullopt;
}

std::optional<PrecisionCode> ParsePrecisionCode(std::string_view token) {
  for (PrecisionCode c : {PrecisionCode::kLow, PrecisionCode::kMed, PrecisionCode::kHigh}) {
    if (Token(c) == token) return c;
  }
  return std::nullopt;
}

std::optional<EntailCode> ParseEntailCode(std::string_view token) {
  for (EntailCode c : {EntailCode::kEntailed, EntailCode::kNonEntailed}) {
    if (Token(c) == token) return c;
  }
  return std::nullopt;
}

std::string ControlCodes::Prefix() const {
  const auto toks = Tokens();
  std::string out(toks[0]);
  out.append(" ").append(toks[1]).append(" ").append(toks[2]);
  return out;
}

MeasureReport Measure(std::string_view response, std::string_view evidence,
                      const nli::EntailmentVerdict& verdict,
                      const text::FirstPersonLexicon& lexicon) {
  const text::TokenSeq r = text::Tokenize(response);
  MeasureReport report;
  report.objective_voice = text::ObjectiveVoice(r, lexicon);
  report.overlap = text::LexicalOverlap(r, text::Tokenize(evidence));
  report.entailment = verdict;
  return report;
}

std::vector<MeasureReport> AnnotateAll(const std::vector<corpus::GroundedExample>& examples,
                                       const nli::EntailmentJudge& judge,
                                       const text::FirstPersonLexicon& lexicon,
                                       std::size_t jobs) {
  std::vector<std::pair<std::string, std::string>> pairs;
  pairs.reserve(examples.size());
  for (const auto& ex : examples) pairs.emplace_back(ex.evidence, ex.response);
  const auto verdicts = judge.JudgeBatch(pairs);

  std::vector<MeasureReport> reports(examples.size());
  ParallelFor(examples.size(), jobs, [&](std::size_t i) {
    const auto& verdict = verdicts[i].ValueOrThrow("example " + examples[i].id);
    reports[i] = Measure(examples[i].response, examples[i].evidence, verdict, lexicon);
  });
  return reports;
}

namespace {

json MeasuresJson(const MeasureReport& r) {
  json m = json::object();
  m["objective_voice"] = r.objective_voice;
  m["lex_precision"] = r.overlap.precision;
  m["lex_recall"] = r.overlap.recall;
  m["entailed"] = r.entailment.entailed;
  if (r.entailment.raw_label) m["nli_label"] = nli::LabelName(*r.entailment.raw_label);
  if (r.entailment.score) m["nli_score"] = *r.entailment.score;
  return m;
}

MeasureReport MeasuresFromJson(const json& m, std::size_t line) {
  if (!m.is_object()) throw RecordError("\"measures\" is not an object", line);
  auto require = [&](const char* key, auto check) -> const json& {
    const auto it = m.find(key);
    if (it == m.end() || !check(*it)) {
      throw RecordError(std::string("measures lack a valid \"") + key + "\"", line);
    }
    return *it;
  };
  const auto is_bool = [](const json& j) { return j.is_boolean(); };
  const auto is_num = [](const json& j) { return j.is_number(); };

  MeasureReport r;
  r.objective_voice = require("objective_voice", is_bool).get<bool>();
  r.overlap.precision = require("lex_precision", is_num).get<double>();
  r.overlap.recall = require("lex_recall", is_num).get<double>();
  r.entailment.entailed = require("entailed", is_bool).get<bool>();
  if (const auto it = m.find("nli_label"); it != m.end() && it->is_string()) {
    r.entailment.raw_label = nli::ParseLabel(it->get<std::string>());
  }
  if (const auto it = m.find("nli_score"); it != m.end() && it->is_number()) {
    r.entailment.score = it->get<double>();
  }
  return r;
}

}  // namespace

std::string MeasuresToJson(const MeasureReport& report) { return MeasuresJson(report).dump(); }

std::string AnnotationToJson(const Annotation& a) {
  json obj = json::object();
  obj["id"] = a.id;
  if (a.split) obj["split"] = corpus::SplitName(*a.split);
  obj["measures"] = MeasuresJson(a.report);
  return obj.dump();
}

Annotation ParseAnnotation(std::string_view json_line, std::size_t line) {
  const json obj = json::parse(json_line, nullptr, false);
  if (obj.is_discarded()) throw ParseError("malformed JSON", line);
  if (!obj.is_object()) throw RecordError("annotation is not an object", line);
  Annotation a;
  const auto id = obj.find("id");
  if (id == obj.end() || !id->is_string()) throw RecordError("annotation lacks \"id\"", line);
  a.id = id->get<std::string>();
  if (const auto split = obj.find("split"); split != obj.end() && split->is_string()) {
    a.split = corpus::ParseSplit(split->get<std::string>());
    if (!a.split) throw RecordError("unknown split", line);
  }
  const auto measures = obj.find("measures");
  if (measures == obj.end()) throw RecordError("annotation lacks \"measures\"", line);
  a.report = MeasuresFromJson(*measures, line);
  return a;
}

std::vector<Annotation> ReadAnnotations(std::istream& in) {
  std::vector<Annotation> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back(ParseAnnotation(line, line_no));
  }
  return out;
}

TercileBoundaries FitTerciles(std::vector<double> values) {
  if (values.size() < 3) {
    throw InvalidArgument("tercile fitting needs at least 3 values, got " +
                          std::to_string(values.size()));
  }
  for (double v : values) {
    if (!(v >= 0.0 && v <= 1.0)) throw InvalidArgument("tercile input outside [0,1]");
  }
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  const std::size_t rank_low = (n + 2) / 3;          // ceil(n/3)
  const std::size_t rank_high = (2 * n + 2) / 3;     // ceil(2n/3)
  return {values[rank_low - 1], values[rank_high - 1], n};
}

std::string BoundariesToJson(const TercileBoundaries& b) {
  json obj = json::object();
  obj["t_low"] = b.t_low;
  obj["t_high"] = b.t_high;
  obj["n_fitted"] = b.n_fitted;
  return obj.dump();
}

TercileBoundaries BoundariesFromJson(std::string_view text) {
  const json obj = json::parse(text, nullptr, false);
  if (obj.is_discarded() || !obj.is_object()) {
    throw ParseError("boundaries file is not a JSON object", 0);
  }
  auto num = [&](const char* key) {
    const auto it = obj.find(key);
    if (it == obj.end() || !it->is_number()) {
      throw RecordError(std::string("boundaries lack numeric \"") + key + "\"", 0);
    }
    return *it;
  };
  TercileBoundaries b;
  b.t_low = num("t_low").get<double>();
  b.t_high = num("t_high").get<double>();
  b.n_fitted = num("n_fitted").get<std::size_t>();
  if (!(0.0 <= b.t_low && b.t_low <= b.t_high && b.t_high <= 1.0) || b.n_fitted < 3) {
    throw RecordError("boundaries violate 0 <= t_low <= t_high <= 1, n_fitted >= 3", 0);
  }
  return b;
}

TercileBoundaries ReadBoundariesFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open boundaries file: " + path);
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return BoundariesFromJson(text);
}

PrecisionCode AssignPrecisionCode(double p, const TercileBoundaries& b) {
  if (p <= b.t_low) return PrecisionCode::kLow;
  if (p <= b.t_high) return PrecisionCode::kMed;
  return PrecisionCode::kHigh;
}

ControlCodes AssignCodes(const MeasureReport& report, const TercileBoundaries& b) {
  return ControlCodes{
      report.objective_voice ? VoiceCode::kNoFirstPerson : VoiceCode::kFirstPerson,
      AssignPrecisionCode(report.overlap.precision, b),
      report.entailment.entailed ? EntailCode::kEntailed : EntailCode::kNonEntailed};
}

namespace {

void CheckAligned(const std::vector<corpus::GroundedExample>& examples,
                  const std::vector<MeasureReport>& reports) {
  if (examples.size() != reports.size()) {
    throw InvalidArgument("examples and measure reports differ in length");
  }
}

}  // namespace

AugmentResult AugmentWithReports(const std::vector<corpus::GroundedExample>& examples,
                                 const std::vector<MeasureReport>& reports,
                                 const std::optional<TercileBoundaries>& boundaries,
                                 const AugmentOptions& options) {
  CheckAligned(examples, reports);
  AugmentResult result;
  if (boundaries) {
    result.boundaries = *boundaries;
  } else {
    std::vector<double> precisions;
    precisions.reserve(reports.size());
    for (std::size_t i = 0; i < examples.size(); ++i) {
      if (examples[i].split != corpus::Split::kTrain) {
        throw InvalidArgument("boundaries can only be fitted on training examples; " +
                              examples[i].id + " is " +
                              std::string(corpus::SplitName(examples[i].split)));
      }
      precisions.push_back(reports[i].overlap.precision);
    }
    result.boundaries = FitTerciles(std::move(precisions));
  }

  result.records.resize(examples.size());
  ParallelFor(examples.size(), options.jobs, [&](std::size_t i) {
    const ControlCodes codes = AssignCodes(reports[i], result.boundaries);
    json rec = json::object();
    rec["id"] = examples[i].id;
    try {
      rec["input"] = corpus::SerializeInput(examples[i], codes, options.token_budget);
    } catch (const InvalidArgument& e) {
      throw InvalidArgument("example " + examples[i].id + ": " + e.what());
    }
    rec["target"] = examples[i].response;
    json code_list = json::array();
    for (std::string_view tok : codes.Tokens()) code_list.push_back(tok);
    rec["codes"] = std::move(code_list);
    rec["measures"] = MeasuresJson(reports[i]);
    result.records[i] = rec.dump();
  });
  return result;
}

AugmentResult Augment(const std::vector<corpus::GroundedExample>& examples,
                      const nli::EntailmentJudge& judge,
                      const std::optional<TercileBoundaries>& boundaries,
                      const AugmentOptions& options) {
  const auto reports = AnnotateAll(examples, judge, options.lexicon, options.jobs);
  return AugmentWithReports(examples, reports, boundaries, options);
}

bool IsFaithful(const MeasureReport& report, const TercileBoundaries& b) {
  return AssignCodes(report, b) == DecodeCodes();
}

std::vector<corpus::GroundedExample> FilterFaithfulWithReports(
    const std::vector<corpus::GroundedExample>& examples,
    const std::vector<MeasureReport>& reports, const TercileBoundaries& b) {
  CheckAligned(examples, reports);
  std::vector<corpus::GroundedExample> out;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    if (IsFaithful(reports[i], b)) out.push_back(examples[i]);
  }
  return out;
}

std::vector<corpus::GroundedExample> FilterFaithful(
    const std::vector<corpus::GroundedExample>& examples, const nli::EntailmentJudge& judge,
    const TercileBoundaries& b, const text::FirstPersonLexicon& lexicon) {
  return FilterFaithfulWithReports(examples, AnnotateAll(examples, judge, lexicon), b);
}

}  // namespace faithctl::control
