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

#ifndef FAITHCTL_CORPUS_H_
#define FAITHCTL_CORPUS_H_

#include <array>
#include <cstddef>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "faithctl/control_codes.h"
#include "faithctl/entailment.h"
#include "faithctl/textmeasures.h"

namespace faithctl::corpus {

enum class Speaker { kWizard, kApprentice };

// "wizard" | "apprentice"
std::string_view SpeakerName(Speaker s);
std::optional<Speaker> ParseSpeaker(std::string_view name);

// "<speaker1>" for the apprentice, "<speaker2>" for the wizard.
std::string_view SpeakerToken(Speaker s);

enum class Split { kTrain, kDevSeen, kDevUnseen, kTestSeen, kTestUnseen };
inline constexpr std::array<Split, 5> kAllSplits = {
    Split::kTrain, Split::kDevSeen, Split::kDevUnseen, Split::kTestSeen,
    Split::kTestUnseen};

// "train" | "dev_seen" | "dev_unseen" | "test_seen" | "test_unseen"
std::string_view SplitName(Split s);
std::optional<Split> ParseSplit(std::string_view name);

struct Turn {
  Speaker speaker = Speaker::kApprentice;
  std::string text;

  bool operator==(const Turn&) const = default;
};

// One wizard reply: history x (oldest first), evidence e, gold response y.
// The reply is by the wizard, so the last history turn is the apprentice's.
struct GroundedExample {
  std::string id;
  std::string topic;
  Split split = Split::kTrain;
  std::vector<Turn> history;
  std::string evidence;
  std::string response;

  bool operator==(const GroundedExample&) const = default;
};

// Throws RecordError (line 0) when an invariant does not hold: empty
// history, last turn not by the apprentice, empty evidence, or a turn whose
// text is blank.
void Validate(const GroundedExample& example);

// ---------------------------------------------------------------------------
// Ingestion

enum class Format { kCanonical, kNativeDataset };

struct IngestOptions {
  // Downgrade record-level problems (and malformed lines) to warnings.
  bool skip_bad_records = false;
  // Split assigned to records read in the native format.
  Split native_split = Split::kTrain;
  // Receives one message per skipped record.
  std::function<void(const std::string&)> on_warning;
};

// Reads every wizard-response example in file order. Canonical input is one
// JSON object per line; blank lines are ignored. Native input is the public
// dataset's dialogue JSON (an array of dialogues, or one dialogue per line).
// Throws ParseError / RecordError carrying the 1-based line (canonical) or
// dialogue ordinal (native) unless skip_bad_records is set.
std::vector<GroundedExample> Ingest(std::istream& in, Format format,
                                    const IngestOptions& options = {});

// The canonical JSONL line for one example, without a trailing newline.
std::string ToCanonicalJson(const GroundedExample& example);
void WriteCanonical(std::ostream& out, const std::vector<GroundedExample>& examples);

// ---------------------------------------------------------------------------
// Extraction from whole dialogues

struct DialogueTurn {
  Turn turn;
  // Labelled evidence span; nullopt when the speaker used none.
  std::optional<std::string> evidence;
};

struct DialogueMeta {
  std::string id_prefix;
  std::string topic;
  Split split = Split::kTrain;
};

// One example per wizard turn that immediately follows an apprentice turn
// and carries evidence; the history is every earlier turn. Example ids are
// "<id_prefix>-<turn index>".
std::vector<GroundedExample> ExtractExamples(const std::vector<DialogueTurn>& dialogue,
                                             const DialogueMeta& meta);

// ---------------------------------------------------------------------------
// Serialization of model inputs

inline constexpr std::size_t kDefaultTokenBudget = 1024;

// "[codes] evidence: <evidence> <speakerK> turn ..." with whitespace runs
// collapsed. Oldest whole turns are dropped until the whitespace-token count
// fits max_tokens; codes, evidence and the final turn are never dropped.
// Throws InvalidArgument("input too long") when even that does not fit.
std::string SerializeInput(const GroundedExample& example,
                           const std::optional<control::ControlCodes>& codes,
                           std::size_t max_tokens = kDefaultTokenBudget);

// Number of whitespace-separated tokens.
std::size_t CountWhitespaceTokens(std::string_view s);

// ---------------------------------------------------------------------------
// Statistics

struct CorpusStats {
  std::size_t n_examples = 0;
  double pct_first_person = 0.0;
  double mean_lex_precision = 0.0;
  double pct_entailed = 0.0;
  std::map<Split, std::size_t> per_split;
};

// Fractions over the examples: responses in first person, mean lexical
// precision of the response against its evidence, responses judged entailed.
// Throws InvalidArgument on an empty list; judge failures propagate as
// BackendUnavailable / ProtocolError.
CorpusStats ComputeCorpusStats(const std::vector<GroundedExample>& examples,
                               const nli::EntailmentJudge& judge,
                               const text::FirstPersonLexicon& lexicon =
                                   text::FirstPersonLexicon::Default());

}  // namespace faithctl::corpus

#endif  // FAITHCTL_CORPUS_H_
