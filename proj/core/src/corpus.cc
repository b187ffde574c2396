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

#include <sstream>

#include "faithctl/errors.h"
#include "json.hpp"
#include "native_dataset.h"

namespace faithctl::corpus {

using nlohmann::json;

std::string_view SpeakerName(Speaker s) {
  return s == Speaker::kWizard ? "wizard" : "apprentice";
}

std::optional<Speaker> ParseSpeaker(std::string_view name) {
  if (name == "wizard") return Speaker::kWizard;
  if (name == "apprentice") return Speaker::kApprentice;
  return std::nullopt;
}

std::string_view SpeakerToken(Speaker s) {
  return s == Speaker::kApprentice ? "<speaker1>" : "<speaker2>";
}

std::string_view SplitName(Split s) {
  switch (s) {
    case Split::kTrain:
      return "train";
    case Split::kDevSeen:
      return "dev_seen";
    case Split::kDevUnseen:
      return "dev_unseen";
    case Split::kTestSeen:
      return "test_seen";
    case Split::kTestUnseen:
      return "test_unseen";
  }
  return "train";
}

std::optional<Split> ParseSplit(std::string_view name) {
  for (Split s : kAllSplits) {
    if (SplitName(s) == name) return s;
  }
  return std::nullopt;
}

namespace {

bool IsBlank(std::string_view s) {
  return s.find_first_not_of(" \t\r\n\f\v") == std::string_view::npos;
}

std::string RequireString(const json& obj, const char* key, std::size_t line) {
  const auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) {
    throw RecordError(std::string("missing or non-string field \"") + key + "\"", line);
  }
  return it->get<std::string>();
}

GroundedExample FromCanonicalJson(const json& obj, std::size_t line) {
  if (!obj.is_object()) throw RecordError("record is not a JSON object", line);
  GroundedExample ex;
  ex.id = RequireString(obj, "id", line);
  ex.topic = RequireString(obj, "topic", line);
  const std::string split = RequireString(obj, "split", line);
  const auto parsed_split = ParseSplit(split);
  if (!parsed_split) throw RecordError("unknown split \"" + split + "\"", line);
  ex.split = *parsed_split;
  ex.evidence = RequireString(obj, "evidence", line);
  ex.response = RequireString(obj, "response", line);

  const auto hist = obj.find("history");
  if (hist == obj.end() || !hist->is_array()) {
    throw RecordError("missing or non-array field \"history\"", line);
  }
  for (const json& t : *hist) {
    if (!t.is_object()) throw RecordError("history entry is not an object", line);
    const std::string speaker = RequireString(t, "speaker", line);
    const auto parsed = ParseSpeaker(speaker);
    if (!parsed) throw RecordError("unknown speaker label \"" + speaker + "\"", line);
    ex.history.push_back({*parsed, RequireString(t, "text", line)});
  }
  try {
    Validate(ex);
  } catch (const RecordError& e) {
    throw RecordError(e.what(), line);
  }
  return ex;
}

std::vector<GroundedExample> IngestCanonical(std::istream& in,
                                             const IngestOptions& options) {
  std::vector<GroundedExample> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (IsBlank(line)) continue;
    try {
      json obj = json::parse(line, nullptr, false);
      if (obj.is_discarded()) throw ParseError("malformed JSON", line_no);
      out.push_back(FromCanonicalJson(obj, line_no));
    } catch (const Error& e) {
      if (!options.skip_bad_records) throw;
      if (options.on_warning) options.on_warning(std::string("skipped: ") + e.what());
    }
  }
  return out;
}

}  // namespace

void Validate(const GroundedExample& example) {
  if (example.history.empty()) throw RecordError("empty history", 0);
  for (const Turn& t : example.history) {
    if (IsBlank(t.text)) throw RecordError("history turn with blank text", 0);
  }
  if (example.history.back().speaker != Speaker::kApprentice) {
    throw RecordError("last history turn must be by the apprentice", 0);
  }
  if (IsBlank(example.evidence)) throw RecordError("empty evidence", 0);
}

std::vector<GroundedExample> Ingest(std::istream& in, Format format,
                                    const IngestOptions& options) {
  if (format == Format::kCanonical) return IngestCanonical(in, options);
  return internal::IngestNative(in, options);
}

std::string ToCanonicalJson(const GroundedExample& example) {
  json history = json::array();
  for (const Turn& t : example.history) {
    history.push_back({{"speaker", SpeakerName(t.speaker)}, {"text", t.text}});
  }
  // Keys in the documented schema order.
  std::ostringstream os;
  os << "{\"id\":" << json(example.id).dump()
     << ",\"topic\":" << json(example.topic).dump()
     << ",\"split\":" << json(SplitName(example.split)).dump()
     << ",\"history\":" << history.dump()
     << ",\"evidence\":" << json(example.evidence).dump()
     << ",\"response\":" << json(example.response).dump() << "}";
  return os.str();
}

void WriteCanonical(std::ostream& out, const std::vector<GroundedExample>& examples) {
  for (const GroundedExample& ex : examples) out << ToCanonicalJson(ex) << '\n';
}

std::vector<GroundedExample> ExtractExamples(const std::vector<DialogueTurn>& dialogue,
                                             const DialogueMeta& meta) {
  std::vector<GroundedExample> out;
  for (std::size_t i = 1; i < dialogue.size(); ++i) {
    const DialogueTurn& cur = dialogue[i];
    if (cur.turn.speaker != Speaker::kWizard) continue;
    if (dialogue[i - 1].turn.speaker != Speaker::kApprentice) continue;
    if (!cur.evidence || IsBlank(*cur.evidence)) continue;

    GroundedExample ex;
    ex.id = meta.id_prefix + "-" + std::to_string(i);
    ex.topic = meta.topic;
    ex.split = meta.split;
    ex.evidence = *cur.evidence;
    ex.response = cur.turn.text;
    for (std::size_t j = 0; j < i; ++j) ex.history.push_back(dialogue[j].turn);
    out.push_back(std::move(ex));
  }
  return out;
}

std::size_t CountWhitespaceTokens(std::string_view s) {
  std::istringstream in{std::string(s)};
  std::size_t n = 0;
  for (std::string tok; in >> tok;) ++n;
  return n;
}

namespace {

// Whitespace-split pieces of `s`.
std::vector<std::string> WhitespaceSplit(std::string_view s) {
  std::istringstream in{std::string(s)};
  std::vector<std::string> out;
  for (std::string tok; in >> tok;) out.push_back(std::move(tok));
  return out;
}

void AppendPieces(std::string& out, const std::vector<std::string>& pieces) {
  for (const std::string& p : pieces) {
    if (!out.empty()) out.push_back(' ');
    out += p;
  }
}

}  // namespace

std::string SerializeInput(const GroundedExample& example,
                           const std::optional<control::ControlCodes>& codes,
                           std::size_t max_tokens) {
  if (example.history.empty()) throw InvalidArgument("example has empty history");

  std::vector<std::string> head;
  if (codes) {
    for (std::string_view tok : codes->Tokens()) head.emplace_back(tok);
  }
  head.emplace_back("evidence:");
  for (std::string& tok : WhitespaceSplit(example.evidence)) head.push_back(std::move(tok));

  std::vector<std::vector<std::string>> turns;
  turns.reserve(example.history.size());
  for (const Turn& t : example.history) {
    std::vector<std::string> pieces{std::string(SpeakerToken(t.speaker))};
    for (std::string& tok : WhitespaceSplit(t.text)) pieces.push_back(std::move(tok));
    turns.push_back(std::move(pieces));
  }

  std::size_t total = head.size();
  for (const auto& t : turns) total += t.size();
  std::size_t first_kept = 0;
  while (total > max_tokens && first_kept + 1 < turns.size()) {
    total -= turns[first_kept].size();
    ++first_kept;
  }
  if (total > max_tokens) {
    throw InvalidArgument("input too long: " + std::to_string(total) +
                          " tokens with only the final turn, budget " +
                          std::to_string(max_tokens));
  }

  std::string out;
  AppendPieces(out, head);
  for (std::size_t i = first_kept; i < turns.size(); ++i) AppendPieces(out, turns[i]);
  return out;
}

CorpusStats ComputeCorpusStats(const std::vector<GroundedExample>& examples,
                               const nli::EntailmentJudge& judge,
                               const text::FirstPersonLexicon& lexicon) {
  if (examples.empty()) throw InvalidArgument("corpus statistics need at least one example");

  std::vector<std::pair<std::string, std::string>> pairs;
  pairs.reserve(examples.size());
  for (const GroundedExample& ex : examples) pairs.emplace_back(ex.evidence, ex.response);
  const std::vector<nli::BatchOutcome> verdicts = judge.JudgeBatch(pairs);

  CorpusStats stats;
  stats.n_examples = examples.size();
  std::size_t first_person = 0;
  std::size_t entailed = 0;
  double precision_sum = 0.0;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    const GroundedExample& ex = examples[i];
    const text::TokenSeq response = text::Tokenize(ex.response);
    if (!text::ObjectiveVoice(response, lexicon)) ++first_person;
    precision_sum += text::LexicalOverlap(response, text::Tokenize(ex.evidence)).precision;
    if (verdicts[i].ValueOrThrow("example " + ex.id).entailed) ++entailed;
    ++stats.per_split[ex.split];
  }
  const auto n = static_cast<double>(examples.size());
  stats.pct_first_person = static_cast<double>(first_person) / n;
  stats.mean_lex_precision = precision_sum / n;
  stats.pct_entailed = static_cast<double>(entailed) / n;
  return stats;
}

}  // namespace faithctl::corpus
