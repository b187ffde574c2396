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

#ifndef FAITHCTL_CONTROL_H_
#define FAITHCTL_CONTROL_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "faithctl/control_codes.h"
#include "faithctl/corpus.h"
#include "faithctl/entailment.h"
#include "faithctl/textmeasures.h"

namespace faithctl::control {

// The three measure outcomes of one response against its evidence.
struct MeasureReport {
  bool objective_voice = true;
  text::LexOverlap overlap;
  nli::EntailmentVerdict entailment;
};

MeasureReport Measure(std::string_view response, std::string_view evidence,
                      const nli::EntailmentVerdict& verdict,
                      const text::FirstPersonLexicon& lexicon);

// Measures every example's gold response. Entailment goes through
// judge.JudgeBatch; a failed element throws with the example id attached.
std::vector<MeasureReport> AnnotateAll(const std::vector<corpus::GroundedExample>& examples,
                                       const nli::EntailmentJudge& judge,
                                       const text::FirstPersonLexicon& lexicon,
                                       std::size_t jobs = 1);

// {"objective_voice":b,"lex_precision":f,"lex_recall":f,"entailed":b,...}
std::string MeasuresToJson(const MeasureReport& report);

// One line of the annotation file written by `faithctl annotate`.
struct Annotation {
  std::string id;
  std::optional<corpus::Split> split;
  MeasureReport report;
};

std::string AnnotationToJson(const Annotation& annotation);
// Throws ParseError / RecordError tagged with `line`.
Annotation ParseAnnotation(std::string_view json_line, std::size_t line);
std::vector<Annotation> ReadAnnotations(std::istream& in);

// ---------------------------------------------------------------------------
// Terciles

// Cut points splitting training lexical precision into low/med/high.
struct TercileBoundaries {
  double t_low = 0.0;
  double t_high = 0.0;
  std::size_t n_fitted = 0;

  bool operator==(const TercileBoundaries&) const = default;
};

// Sorted ascending; t_low is the value at 1-based rank ceil(n/3), t_high at
// rank ceil(2n/3). Throws InvalidArgument on fewer than 3 values or values
// outside [0,1].
TercileBoundaries FitTerciles(std::vector<double> values);

// {"t_low": f, "t_high": f, "n_fitted": n}
std::string BoundariesToJson(const TercileBoundaries& b);
TercileBoundaries BoundariesFromJson(std::string_view json);
TercileBoundaries ReadBoundariesFile(const std::string& path);

// p <= t_low -> Low, p <= t_high -> Med, otherwise High.
PrecisionCode AssignPrecisionCode(double p, const TercileBoundaries& b);

ControlCodes AssignCodes(const MeasureReport& report, const TercileBoundaries& b);

// ---------------------------------------------------------------------------
// Training-file augmentation

struct AugmentOptions {
  std::size_t token_budget = corpus::kDefaultTokenBudget;
  text::FirstPersonLexicon lexicon = text::FirstPersonLexicon::Default();
  std::size_t jobs = 1;
};

struct AugmentResult {
  TercileBoundaries boundaries;
  // One JSON record per example, in input order, without newlines.
  std::vector<std::string> records;
};

// With `boundaries` absent they are fitted on the examples' precisions, which
// must all come from the training split. `reports` are aligned with
// `examples`.
AugmentResult AugmentWithReports(const std::vector<corpus::GroundedExample>& examples,
                                 const std::vector<MeasureReport>& reports,
                                 const std::optional<TercileBoundaries>& boundaries,
                                 const AugmentOptions& options = {});

AugmentResult Augment(const std::vector<corpus::GroundedExample>& examples,
                      const nli::EntailmentJudge& judge,
                      const std::optional<TercileBoundaries>& boundaries,
                      const AugmentOptions& options = {});

// ---------------------------------------------------------------------------
// Faithful-only subset

// True when the report yields exactly DecodeCodes() under `b`.
bool IsFaithful(const MeasureReport& report, const TercileBoundaries& b);

std::vector<corpus::GroundedExample> FilterFaithfulWithReports(
    const std::vector<corpus::GroundedExample>& examples,
    const std::vector<MeasureReport>& reports, const TercileBoundaries& b);

std::vector<corpus::GroundedExample> FilterFaithful(
    const std::vector<corpus::GroundedExample>& examples, const nli::EntailmentJudge& judge,
    const TercileBoundaries& b,
    const text::FirstPersonLexicon& lexicon = text::FirstPersonLexicon::Default());

}  // namespace faithctl::control

#endif  // FAITHCTL_CONTROL_H_
