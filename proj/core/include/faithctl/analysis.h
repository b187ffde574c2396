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

#ifndef FAITHCTL_ANALYSIS_H_
#define FAITHCTL_ANALYSIS_H_

#include <array>
#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "faithctl/entailment.h"
#include "faithctl/textmeasures.h"

namespace faithctl::analysis {

// ---------------------------------------------------------------------------
// BLEU

struct BleuStats {
  std::array<std::size_t, 4> matches{};  // clipped n-gram matches, n = 1..4
  std::array<std::size_t, 4> totals{};   // candidate n-grams, n = 1..4
  std::size_t candidate_length = 0;
  std::size_t reference_length = 0;

  double Precision(std::size_t n) const;  // n in 1..4
  double BrevityPenalty() const;
  double Score() const;
};

// Corpus-level statistics with one reference per candidate. Throws
// InvalidArgument when the lists differ in length.
BleuStats CorpusBleuStats(const std::vector<text::TokenSeq>& candidates,
                          const std::vector<text::TokenSeq>& references);

// Uniform 1/4 weights over clipped 1..4-gram precisions, brevity penalty
// exp(1 - r/c) when c < r. No smoothing: any zero precision gives 0.
double Bleu4(const std::vector<text::TokenSeq>& candidates,
             const std::vector<text::TokenSeq>& references);

// ---------------------------------------------------------------------------
// System-output evaluation

struct EvalRow {
  std::string id;
  std::string system_response;
  std::string reference_response;
  std::string evidence;
};

// JSONL with {"id", "system", "reference", "evidence"} per line.
std::vector<EvalRow> ReadEvalRows(std::istream& in);

struct RowMeasures {
  bool objective_voice = true;
  text::LexOverlap overlap;
  std::optional<bool> entailed;
};

struct EvalReport {
  std::size_t n = 0;
  double bleu4 = 0.0;
  double pct_no_first_person = 0.0;
  double mean_lex_precision = 0.0;
  double mean_lex_recall = 0.0;
  // Absent when the judge could not score every row.
  std::optional<double> pct_entailed;
  std::string entailment_error;
  nli::FailureKind entailment_failure = nli::FailureKind::kNone;
};

struct Evaluation {
  EvalReport report;
  std::vector<RowMeasures> rows;
};

// Throws InvalidArgument on an empty row list. Means are reduced left to
// right in row order.
Evaluation Evaluate(const std::vector<EvalRow>& rows, const nli::EntailmentJudge& judge,
                    const text::FirstPersonLexicon& lexicon =
                        text::FirstPersonLexicon::Default());

std::string ReportToJson(const EvalReport& report);
// Aligned two-line table, percentages with one decimal.
std::string ReportToTable(const EvalReport& report);

// ---------------------------------------------------------------------------
// Human-rating statistics

// Product-moment correlation. Throws InvalidArgument on length mismatch,
// fewer than 2 points, or zero variance in either input.
double Pearson(std::span<const double> x, std::span<const double> y);

enum class Quality { kFluency, kRelevance, kFaithfulness, kObjectivity };
inline constexpr std::array<Quality, 4> kAllQualities = {
    Quality::kFluency, Quality::kRelevance, Quality::kFaithfulness, Quality::kObjectivity};
std::string_view QualityName(Quality q);

// items x raters grid of optional ratings per quality.
class RatingsMatrix {
 public:
  using Grid = std::vector<std::vector<std::optional<double>>>;

  RatingsMatrix(std::vector<std::string> items, std::vector<std::string> raters,
                int min_rating = 1, int max_rating = 5);

  const std::vector<std::string>& items() const { return items_; }
  const std::vector<std::string>& raters() const { return raters_; }

  // Throws InvalidArgument when the rating is outside [min, max].
  void Set(std::size_t item, std::size_t rater, Quality q, std::optional<double> rating);
  const Grid& grid(Quality q) const { return grids_[static_cast<std::size_t>(q)]; }

  // Mean over the raters who rated the item; nullopt when none did.
  std::optional<double> ItemMean(std::size_t item, Quality q) const;

 private:
  std::vector<std::string> items_;
  std::vector<std::string> raters_;
  int min_rating_;
  int max_rating_;
  std::array<Grid, 4> grids_;
};

// CSV "item_id,rater_id,fluency,relevance,faithfulness,objectivity" with a
// header row; blank cells are missing ratings. Items and raters keep first-
// appearance order. Needs at least 2 raters.
RatingsMatrix ReadRatingsCsv(std::istream& in);

// Interval-metric alpha over an items x raters grid. Only items with two or
// more ratings are pairable. Returns 1 when observed disagreement is zero.
// Throws InvalidArgument when fewer than 2 pairable values exist.
double KrippendorffAlpha(const RatingsMatrix::Grid& units);

// Per-item automatic measures, keyed by item id.
struct ItemMeasures {
  double no_first_person = 0.0;  // 1 when objective voice
  double lex_precision = 0.0;
  double lex_recall = 0.0;
  std::optional<double> entailed;  // 1 when entailed
};

// JSONL with {"id": str, "measures": {"objective_voice": b, "lex_precision": f,
// "lex_recall": f, "entailed": b|null}} per line (the annotation format).
std::map<std::string, ItemMeasures> ReadItemMeasures(std::istream& in);

enum class Measure { kNoFirstPerson, kLexPrecision, kLexRecall, kEntailed };
inline constexpr std::array<Measure, 4> kAllMeasures = {
    Measure::kNoFirstPerson, Measure::kLexPrecision, Measure::kLexRecall, Measure::kEntailed};
std::string_view MeasureName(Measure m);

struct CorrelationCell {
  std::optional<double> r;
  std::size_t n_pairs = 0;
  std::size_t n_dropped = 0;
  std::string error;  // set when r is absent
};

struct CorrelationTable {
  std::array<std::array<CorrelationCell, 4>, 4> cells;  // [measure][quality]
  std::array<std::optional<double>, 4> alpha;           // per quality
  std::array<std::string, 4> alpha_error;

  const CorrelationCell& at(Measure m, Quality q) const {
    return cells[static_cast<std::size_t>(m)][static_cast<std::size_t>(q)];
  }
};

// Pearson r between per-item mean ratings and per-item measures for every
// (measure, quality) pair, with pairwise deletion of items missing either
// side. Cells that cannot be computed carry an error instead of r.
CorrelationTable Correlate(const RatingsMatrix& ratings,
                           const std::map<std::string, ItemMeasures>& measures);

std::string CorrelationToJson(const CorrelationTable& table);

}  // namespace faithctl::analysis

#endif  // FAITHCTL_ANALYSIS_H_
