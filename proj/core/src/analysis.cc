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

#include "faithctl/analysis.h"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "faithctl/errors.h"
#include "json.hpp"

namespace faithctl::analysis {

using nlohmann::json;

namespace {

using NgramCounts = std::map<std::vector<std::string_view>, std::size_t>;

NgramCounts CountNgrams(const text::TokenSeq& seq, std::size_t n) {
  NgramCounts counts;
  if (seq.size() < n) return counts;
  for (std::size_t i = 0; i + n <= seq.size(); ++i) {
    std::vector<std::string_view> gram;
    gram.reserve(n);
    for (std::size_t k = 0; k < n; ++k) gram.emplace_back(seq.tokens[i + k]);
    ++counts[std::move(gram)];
  }
  return counts;
}

}  // namespace

double BleuStats::Precision(std::size_t n) const {
  const std::size_t i = n - 1;
  if (totals[i] == 0) return 0.0;
  return static_cast<double>(matches[i]) / static_cast<double>(totals[i]);
}

double BleuStats::BrevityPenalty() const {
  if (candidate_length == 0) return 0.0;
  if (candidate_length >= reference_length) return 1.0;
  return std::exp(1.0 - static_cast<double>(reference_length) /
                            static_cast<double>(candidate_length));
}

double BleuStats::Score() const {
  double log_sum = 0.0;
  for (std::size_t n = 1; n <= 4; ++n) {
    const double p = Precision(n);
    if (p <= 0.0) return 0.0;
    log_sum += 0.25 * std::log(p);
  }
  return BrevityPenalty() * std::exp(log_sum);
}

BleuStats CorpusBleuStats(const std::vector<text::TokenSeq>& candidates,
                          const std::vector<text::TokenSeq>& references) {
  if (candidates.size() != references.size()) {
    throw InvalidArgument("BLEU needs one reference per candidate");
  }
  BleuStats stats;
  for (std::size_t s = 0; s < candidates.size(); ++s) {
    const text::TokenSeq& cand = candidates[s];
    const text::TokenSeq& ref = references[s];
    stats.candidate_length += cand.size();
    stats.reference_length += ref.size();
    for (std::size_t n = 1; n <= 4; ++n) {
      const NgramCounts cand_counts = CountNgrams(cand, n);
      const NgramCounts ref_counts = CountNgrams(ref, n);
      for (const auto& [gram, count] : cand_counts) {
        stats.totals[n - 1] += count;
        const auto it = ref_counts.find(gram);
        if (it != ref_counts.end()) stats.matches[n - 1] += std::min(count, it->second);
      }
    }
  }
  return stats;
}

double Bleu4(const std::vector<text::TokenSeq>& candidates,
             const std::vector<text::TokenSeq>& references) {
  return CorpusBleuStats(candidates, references).Score();
}

std::vector<EvalRow> ReadEvalRows(std::istream& in) {
  std::vector<EvalRow> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const json obj = json::parse(line, nullptr, false);
    if (obj.is_discarded()) throw ParseError("malformed JSON", line_no);
    if (!obj.is_object()) throw RecordError("row is not a JSON object", line_no);
    auto field = [&](const char* key) {
      const auto it = obj.find(key);
      if (it == obj.end() || !it->is_string()) {
        throw RecordError(std::string("missing or non-string field \"") + key + "\"", line_no);
      }
      return it->get<std::string>();
    };
    rows.push_back({field("id"), field("system"), field("reference"), field("evidence")});
  }
  return rows;
}

Evaluation Evaluate(const std::vector<EvalRow>& rows, const nli::EntailmentJudge& judge,
                    const text::FirstPersonLexicon& lexicon) {
  if (rows.empty()) throw InvalidArgument("evaluation needs at least one row");

  std::vector<std::pair<std::string, std::string>> pairs;
  pairs.reserve(rows.size());
  for (const EvalRow& r : rows) pairs.emplace_back(r.evidence, r.system_response);
  const auto verdicts = judge.JudgeBatch(pairs);

  Evaluation out;
  out.rows.resize(rows.size());
  std::vector<text::TokenSeq> candidates;
  std::vector<text::TokenSeq> references;
  candidates.reserve(rows.size());
  references.reserve(rows.size());

  std::size_t objective = 0;
  std::size_t entailed = 0;
  double precision_sum = 0.0;
  double recall_sum = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    text::TokenSeq system = text::Tokenize(rows[i].system_response);
    RowMeasures& m = out.rows[i];
    m.objective_voice = text::ObjectiveVoice(system, lexicon);
    m.overlap = text::LexicalOverlap(system, text::Tokenize(rows[i].evidence));
    if (verdicts[i].ok()) {
      m.entailed = verdicts[i].verdict->entailed;
      if (*m.entailed) ++entailed;
    } else if (out.report.entailment_error.empty()) {
      out.report.entailment_error = "row " + rows[i].id + ": " + verdicts[i].error;
      out.report.entailment_failure = verdicts[i].failure;
    }
    if (m.objective_voice) ++objective;
    precision_sum += m.overlap.precision;
    recall_sum += m.overlap.recall;
    candidates.push_back(std::move(system));
    references.push_back(text::Tokenize(rows[i].reference_response));
  }

  const auto n = static_cast<double>(rows.size());
  EvalReport& rep = out.report;
  rep.n = rows.size();
  rep.bleu4 = Bleu4(candidates, references);
  rep.pct_no_first_person = static_cast<double>(objective) / n;
  rep.mean_lex_precision = precision_sum / n;
  rep.mean_lex_recall = recall_sum / n;
  if (rep.entailment_error.empty()) rep.pct_entailed = static_cast<double>(entailed) / n;
  return out;
}

std::string ReportToJson(const EvalReport& report) {
  json obj = json::object();
  obj["n"] = report.n;
  obj["bleu4"] = report.bleu4;
  obj["pct_no_first_person"] = report.pct_no_first_person;
  obj["mean_lex_precision"] = report.mean_lex_precision;
  obj["mean_lex_recall"] = report.mean_lex_recall;
  if (report.pct_entailed) {
    obj["pct_entailed"] = *report.pct_entailed;
  } else {
    obj["pct_entailed"] = nullptr;
    obj["entailment_error"] = report.entailment_error;
  }
  return obj.dump();
}

std::string ReportToTable(const EvalReport& report) {
  auto pct = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", 100.0 * v);
    return std::string(buf);
  };
  const std::array<std::pair<std::string, std::string>, 6> cols = {{
      {"n", std::to_string(report.n)},
      {"B4", pct(report.bleu4)},
      {"N1P%", pct(report.pct_no_first_person)},
      {"Prec", pct(report.mean_lex_precision)},
      {"Rec", pct(report.mean_lex_recall)},
      {"NLI%", report.pct_entailed ? pct(*report.pct_entailed) : std::string("n/a")},
  }};
  std::string header;
  std::string values;
  for (std::size_t i = 0; i < cols.size(); ++i) {
    const std::size_t width = std::max(cols[i].first.size(), cols[i].second.size());
    auto pad = [&](const std::string& s) { return std::string(width - s.size(), ' ') + s; };
    if (i > 0) {
      header += "  ";
      values += "  ";
    }
    header += pad(cols[i].first);
    values += pad(cols[i].second);
  }
  return header + "\n" + values + "\n";
}

double Pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InvalidArgument("pearson inputs differ in length");
  if (x.size() < 2) throw InvalidArgument("pearson needs at least 2 points");
  const auto n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw InvalidArgument("pearson undefined for zero variance");
  const double r = sxy / std::sqrt(sxx * syy);
  return std::clamp(r, -1.0, 1.0);
}

}  // namespace faithctl::analysis
