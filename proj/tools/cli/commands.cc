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

#include <algorithm>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <sstream>

#include "cli/app.h"
#include "cli/io.h"
#include "faithctl/analysis.h"
#include "faithctl/control.h"
#include "faithctl/corpus.h"
#include "faithctl/entailment.h"
#include "faithctl/errors.h"
#include "faithctl/parallel.h"
#include "faithctl/sampling.h"
#include "faithctl/textmeasures.h"
#include "json.hpp"

namespace faithctl::cli {
namespace {

using nlohmann::json;

void Require(const std::string& value, const char* flag) {
  if (value.empty()) throw InvalidArgument(std::string(flag) + " is required");
}

std::size_t Jobs(const ToolConfig& cfg) { return cfg.jobs == 0 ? DefaultJobs() : cfg.jobs; }

text::FirstPersonLexicon Lexicon(const ToolConfig& cfg) {
  if (cfg.lexicon.empty()) return text::FirstPersonLexicon::Default();
  return text::FirstPersonLexicon::FromFile(cfg.lexicon);
}

std::unique_ptr<nli::EntailmentJudge> Judge(const ToolConfig& cfg) {
  nli::JudgeConfig jc;
  if (cfg.judge == "heuristic") {
    jc.backend = nli::Backend::kHeuristic;
  } else if (cfg.judge == "remote") {
    jc.backend = nli::Backend::kRemote;
  } else {
    throw InvalidArgument("--judge must be heuristic or remote");
  }
  jc.theta = cfg.theta;
  if (!cfg.judge_endpoint.empty()) jc.endpoint = cfg.judge_endpoint;
  jc.max_in_flight = std::max<std::size_t>(Jobs(cfg), 1);
  return nli::MakeJudge(jc);
}

std::vector<corpus::GroundedExample> ReadCanonical(const ToolConfig& cfg, std::ostream& err) {
  Require(cfg.data, "--data");
  std::ifstream in = OpenInput(cfg.data);
  corpus::IngestOptions opts;
  opts.skip_bad_records = cfg.skip_bad_records;
  opts.on_warning = [&err](const std::string& msg) { err << "warning: " << msg << "\n"; };
  return corpus::Ingest(in, corpus::Format::kCanonical, opts);
}

// Native file names carry the split: train.json, valid_random_split.json,
// valid_topic_split.json, test_random_split.json, test_topic_split.json.
corpus::Split InferSplit(const std::string& path) {
  const std::string stem = std::filesystem::path(path).stem().string();
  if (auto s = corpus::ParseSplit(stem)) return *s;
  if (stem.starts_with("valid_random")) return corpus::Split::kDevSeen;
  if (stem.starts_with("valid_topic")) return corpus::Split::kDevUnseen;
  if (stem.starts_with("test_random")) return corpus::Split::kTestSeen;
  if (stem.starts_with("test_topic")) return corpus::Split::kTestUnseen;
  return corpus::Split::kTrain;
}

// Reports for `examples`, taken from the --annotations cache when given
// (matched by id) and computed with the judge otherwise.
std::vector<control::MeasureReport> Reports(const ToolConfig& cfg,
                                            const std::vector<corpus::GroundedExample>& examples,
                                            const text::FirstPersonLexicon& lexicon) {
  if (cfg.annotations.empty()) {
    return control::AnnotateAll(examples, *Judge(cfg), lexicon, Jobs(cfg));
  }
  std::ifstream in = OpenInput(cfg.annotations);
  std::map<std::string, control::MeasureReport> by_id;
  for (control::Annotation& a : control::ReadAnnotations(in)) {
    by_id.insert_or_assign(a.id, std::move(a.report));
  }
  std::vector<control::MeasureReport> reports;
  reports.reserve(examples.size());
  for (const corpus::GroundedExample& ex : examples) {
    const auto it = by_id.find(ex.id);
    if (it == by_id.end()) {
      throw InvalidArgument("annotations file has no entry for example " + ex.id);
    }
    reports.push_back(it->second);
  }
  return reports;
}

std::string Fixed(double v, int digits) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(digits);
  s << v;
  return s.str();
}

}  // namespace

int CmdIngest(const ToolConfig& cfg, std::ostream& out, std::ostream& err) {
  Require(cfg.data, "--data");
  Require(cfg.out, "--out");
  corpus::IngestOptions opts;
  opts.skip_bad_records = cfg.skip_bad_records;
  opts.on_warning = [&err](const std::string& msg) { err << "warning: " << msg << "\n"; };
  corpus::Format format;
  if (cfg.format == "native") {
    format = corpus::Format::kNativeDataset;
  } else if (cfg.format == "canonical") {
    format = corpus::Format::kCanonical;
  } else {
    throw InvalidArgument("--format must be native or canonical");
  }
  if (cfg.split.empty()) {
    opts.native_split = InferSplit(cfg.data);
  } else if (auto s = corpus::ParseSplit(cfg.split)) {
    opts.native_split = *s;
  } else {
    throw InvalidArgument("unknown --split " + cfg.split);
  }
  std::ifstream in = OpenInput(cfg.data);
  const auto examples = corpus::Ingest(in, format, opts);
  AtomicFile file(cfg.out);
  corpus::WriteCanonical(file.stream(), examples);
  file.Commit();
  out << examples.size() << " examples written to " << cfg.out << "\n";
  return kExitOk;
}

int CmdStats(const ToolConfig& cfg, std::ostream& out, std::ostream& err) {
  Require(cfg.out, "--out");
  const auto examples = ReadCanonical(cfg, err);
  const auto judge = Judge(cfg);
  const corpus::CorpusStats s = corpus::ComputeCorpusStats(examples, *judge, Lexicon(cfg));
  json per_split = json::object();
  for (const auto& [split, n] : s.per_split) per_split[std::string(corpus::SplitName(split))] = n;
  json obj = json::object();
  obj["n_examples"] = s.n_examples;
  obj["pct_first_person"] = s.pct_first_person;
  obj["mean_lex_precision"] = s.mean_lex_precision;
  obj["pct_entailed"] = s.pct_entailed;
  obj["per_split"] = per_split;
  AtomicFile file(cfg.out);
  file.stream() << obj.dump() << "\n";
  file.Commit();
  out << s.n_examples << " examples: first person " << Fixed(100 * s.pct_first_person, 1)
      << "%, lexical precision " << Fixed(s.mean_lex_precision, 3) << ", entailed "
      << Fixed(100 * s.pct_entailed, 1) << "%\n";
  return kExitOk;
}

int CmdAnnotate(const ToolConfig& cfg, std::ostream& out, std::ostream& err) {
  Require(cfg.out, "--out");
  const auto examples = ReadCanonical(cfg, err);
  const auto judge = Judge(cfg);
  const auto reports = control::AnnotateAll(examples, *judge, Lexicon(cfg), Jobs(cfg));
  AtomicFile file(cfg.out);
  for (std::size_t i = 0; i < examples.size(); ++i) {
    file.stream() << control::AnnotationToJson({examples[i].id, examples[i].split, reports[i]})
                  << "\n";
  }
  file.Commit();
  out << examples.size() << " annotations written to " << cfg.out << "\n";
  return kExitOk;
}

int CmdTerciles(const ToolConfig& cfg, std::ostream& out, std::ostream&) {
  Require(cfg.data, "--data");
  Require(cfg.out, "--out");
  std::ifstream in = OpenInput(cfg.data);
  std::vector<double> values;
  for (const control::Annotation& a : control::ReadAnnotations(in)) {
    if (!a.split || *a.split == corpus::Split::kTrain) {
      values.push_back(a.report.overlap.precision);
    }
  }
  const control::TercileBoundaries b = control::FitTerciles(std::move(values));
  AtomicFile file(cfg.out);
  file.stream() << control::BoundariesToJson(b) << "\n";
  file.Commit();
  out << "terciles t_low=" << b.t_low << " t_high=" << b.t_high << " fitted on " << b.n_fitted
      << " training annotations\n";
  return kExitOk;
}

int CmdAugment(const ToolConfig& cfg, std::ostream& out, std::ostream& err) {
  Require(cfg.out, "--out");
  const auto examples = ReadCanonical(cfg, err);
  control::AugmentOptions opts;
  opts.token_budget = cfg.budget;
  opts.lexicon = Lexicon(cfg);
  opts.jobs = Jobs(cfg);
  std::optional<control::TercileBoundaries> boundaries;
  if (!cfg.boundaries.empty()) boundaries = control::ReadBoundariesFile(cfg.boundaries);
  const auto reports = Reports(cfg, examples, opts.lexicon);
  const control::AugmentResult result =
      control::AugmentWithReports(examples, reports, boundaries, opts);

  AtomicFile file(cfg.out);
  for (const std::string& rec : result.records) file.stream() << rec << "\n";
  std::optional<AtomicFile> sidecar;
  std::filesystem::path sidecar_path;
  if (!boundaries) {
    sidecar_path = std::filesystem::path(cfg.out);
    sidecar_path.replace_extension(".boundaries.json");
    sidecar.emplace(sidecar_path);
    sidecar->stream() << control::BoundariesToJson(result.boundaries) << "\n";
  }
  file.Commit();
  if (sidecar) sidecar->Commit();
  out << result.records.size() << " augmented examples written to " << cfg.out;
  if (sidecar) out << " (boundaries in " << sidecar_path.string() << ")";
  out << "\n";
  return kExitOk;
}

int CmdFilter(const ToolConfig& cfg, std::ostream& out, std::ostream& err) {
  Require(cfg.out, "--out");
  Require(cfg.boundaries, "--boundaries");
  const auto examples = ReadCanonical(cfg, err);
  const control::TercileBoundaries b = control::ReadBoundariesFile(cfg.boundaries);
  const auto reports = Reports(cfg, examples, Lexicon(cfg));
  const auto kept = control::FilterFaithfulWithReports(examples, reports, b);
  AtomicFile file(cfg.out);
  corpus::WriteCanonical(file.stream(), kept);
  file.Commit();
  out << kept.size() << " of " << examples.size() << " examples kept in " << cfg.out << "\n";
  return kExitOk;
}

int CmdResample(const ToolConfig& cfg, std::ostream& out, std::ostream& err) {
  Require(cfg.out, "--out");
  const auto examples = ReadCanonical(cfg, err);
  const text::FirstPersonLexicon lexicon = Lexicon(cfg);

  sampling::ResampleConfig rs;
  rs.max_draws = cfg.max_draws;
  rs.use_control_codes = !cfg.no_control_codes;
  rs.token_budget = cfg.budget;
  rs.criteria.clear();
  for (const std::string& name : cfg.criteria) {
    const auto c = sampling::ParseCriterion(name);
    if (!c) throw InvalidArgument("unknown criterion " + name);
    rs.criteria.insert(*c);
  }
  if (rs.criteria.contains(sampling::Criterion::kHighPrecision)) {
    Require(cfg.boundaries, "--boundaries (needed by high_precision)");
    rs.boundaries = control::ReadBoundariesFile(cfg.boundaries);
  }
  rs.Validate();

  sampling::GenerationConfig gen;
  gen.nucleus_p = cfg.top_p;
  gen.min_tokens = cfg.min_tokens;
  gen.max_tokens = cfg.max_tokens;
  gen.seed = cfg.seed;
  gen.Validate();

  std::unique_ptr<sampling::Generator> generator;
  if (cfg.gen == "simulated") {
    sampling::SimulatedGeneratorConfig sc;
    sc.faithful_prob = cfg.faithful_prob;
    sc.lexicon = lexicon;
    generator = std::make_unique<sampling::SimulatedGenerator>(std::move(sc));
  } else if (cfg.gen == "remote") {
    Require(cfg.gen_endpoint, "--gen-endpoint");
    sampling::RemoteGeneratorConfig rc;
    rc.endpoint = cfg.gen_endpoint;
    generator = std::make_unique<sampling::RemoteGenerator>(std::move(rc));
  } else {
    throw InvalidArgument("--gen must be simulated or remote");
  }
  const auto judge = Judge(cfg);
  const sampling::ResampleContext ctx{*generator, *judge, lexicon};

  std::vector<sampling::ResampleResult> results(examples.size());
  ParallelFor(examples.size(), Jobs(cfg), [&](std::size_t i) {
    try {
      results[i] = sampling::Resample(examples[i], gen, rs, ctx,
                                      sampling::EpisodeSeed(cfg.seed, i));
    } catch (const sampling::ResampleAborted& e) {
      const std::string msg = "example " + examples[i].id + ": " + e.what();
      if (e.cause() == nli::FailureKind::kUnavailable) throw BackendUnavailable(msg);
      if (e.cause() == nli::FailureKind::kProtocol) throw ProtocolError(msg);
      throw Error(msg);
    }
  });

  AtomicFile file(cfg.out);
  std::size_t accepted = 0;
  std::size_t draws = 0;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    const sampling::ResampleResult& r = results[i];
    json satisfied = json::object();
    for (const auto& [c, ok] : r.chosen.satisfied) satisfied[std::string(sampling::CriterionName(c))] = ok;
    json rec = json::object();
    rec["id"] = examples[i].id;
    rec["text"] = r.chosen.text;
    rec["draws_used"] = r.draws_used;
    rec["accepted"] = r.accepted;
    rec["fallback"] = r.fallback;
    rec["lex_precision"] = r.chosen.lex_precision;
    rec["satisfied"] = satisfied;
    file.stream() << rec.dump() << "\n";
    accepted += r.accepted ? 1 : 0;
    draws += r.draws_used;
  }
  file.Commit();
  const double n = std::max<double>(1.0, static_cast<double>(examples.size()));
  out << examples.size() << " episodes: accepted " << Fixed(100.0 * accepted / n, 1)
      << "%, mean draws " << Fixed(draws / n, 2) << ", written to " << cfg.out << "\n";
  return kExitOk;
}

int CmdEvaluate(const ToolConfig& cfg, std::ostream& out, std::ostream&) {
  Require(cfg.data, "--data");
  Require(cfg.out, "--out");
  std::ifstream in = OpenInput(cfg.data);
  const auto rows = analysis::ReadEvalRows(in);
  const auto judge = Judge(cfg);
  const analysis::Evaluation ev = analysis::Evaluate(rows, *judge, Lexicon(cfg));
  // A report without the entailment column is not the requested artifact.
  switch (ev.report.entailment_failure) {
    case nli::FailureKind::kNone:
      break;
    case nli::FailureKind::kUnavailable:
      throw BackendUnavailable(ev.report.entailment_error);
    case nli::FailureKind::kProtocol:
      throw ProtocolError(ev.report.entailment_error);
    case nli::FailureKind::kOther:
      throw Error(ev.report.entailment_error);
  }

  AtomicFile file(cfg.out);
  file.stream() << analysis::ReportToJson(ev.report) << "\n";
  std::optional<AtomicFile> table;
  if (!cfg.table.empty()) {
    table.emplace(cfg.table);
    table->stream() << analysis::ReportToTable(ev.report);
  }
  std::optional<AtomicFile> row_file;
  if (!cfg.rows_out.empty()) {
    row_file.emplace(cfg.rows_out);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const analysis::RowMeasures& m = ev.rows[i];
      json rec = json::object();
      rec["id"] = rows[i].id;
      rec["objective_voice"] = m.objective_voice;
      rec["lex_precision"] = m.overlap.precision;
      rec["lex_recall"] = m.overlap.recall;
      rec["entailed"] = m.entailed ? json(*m.entailed) : json(nullptr);
      row_file->stream() << rec.dump() << "\n";
    }
  }
  file.Commit();
  if (table) table->Commit();
  if (row_file) row_file->Commit();
  out << ev.report.n << " rows: BLEU-4 " << Fixed(100 * ev.report.bleu4, 2) << ", entailed "
      << (ev.report.pct_entailed ? Fixed(100 * *ev.report.pct_entailed, 1) + "%"
                                 : std::string("n/a"))
      << ", report in " << cfg.out << "\n";
  return kExitOk;
}

int CmdCorrelate(const ToolConfig& cfg, std::ostream& out, std::ostream&) {
  Require(cfg.data, "--data");
  Require(cfg.measures, "--measures");
  Require(cfg.out, "--out");
  std::ifstream ratings_in = OpenInput(cfg.data);
  const analysis::RatingsMatrix ratings = analysis::ReadRatingsCsv(ratings_in);
  std::ifstream measures_in = OpenInput(cfg.measures);
  const auto measures = analysis::ReadItemMeasures(measures_in);
  const analysis::CorrelationTable table = analysis::Correlate(ratings, measures);
  AtomicFile file(cfg.out);
  file.stream() << analysis::CorrelationToJson(table) << "\n";
  file.Commit();
  std::size_t computed = 0;
  for (const auto& row : table.cells) {
    for (const auto& cell : row) computed += cell.r ? 1 : 0;
  }
  out << ratings.items().size() << " items, " << ratings.raters().size() << " raters: "
      << computed << " of 16 correlations computed, written to " << cfg.out << "\n";
  return kExitOk;
}

}  // namespace faithctl::cli
