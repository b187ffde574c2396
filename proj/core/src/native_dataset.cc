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

#include "native_dataset.h"

#include <algorithm>
#include <cctype>
#include <iterator>
#include <sstream>
#include <string>

#include "faithctl/errors.h"

namespace faithctl::corpus::internal {

using nlohmann::json;

namespace {

constexpr std::string_view kNoPassage = "no_passages_used";

// The single labelled sentence of a wizard turn, if any.
std::optional<std::string> CheckedSentence(const json& turn) {
  const auto it = turn.find("checked_sentence");
  if (it == turn.end() || !it->is_object()) return std::nullopt;
  for (const auto& [key, value] : it->items()) {
    if (key == kNoPassage || !value.is_string()) continue;
    std::string sentence = value.get<std::string>();
    if (sentence == kNoPassage || sentence.empty()) continue;
    return sentence;
  }
  return std::nullopt;
}

void Skip(const IngestOptions& options, const Error& e) {
  if (!options.skip_bad_records) throw;
  if (options.on_warning) options.on_warning(std::string("skipped: ") + e.what());
}

}  // namespace

std::optional<Speaker> ParseNativeSpeaker(std::string_view tag) {
  std::string lowered;
  std::transform(tag.begin(), tag.end(), std::back_inserter(lowered),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  const auto ends_with = [&](std::string_view suffix) {
    return lowered.size() >= suffix.size() &&
           lowered.compare(lowered.size() - suffix.size(), suffix.size(), suffix) == 0;
  };
  if (lowered == "wizard" || ends_with("_wizard")) return Speaker::kWizard;
  if (lowered == "apprentice" || ends_with("_apprentice")) return Speaker::kApprentice;
  return std::nullopt;
}

std::vector<GroundedExample> ExamplesFromNativeDialogue(const json& dialogue,
                                                        std::size_t ordinal, Split split) {
  if (!dialogue.is_object()) throw RecordError("dialogue is not a JSON object", ordinal);
  const auto dialog = dialogue.find("dialog");
  if (dialog == dialogue.end() || !dialog->is_array()) {
    throw RecordError("dialogue lacks a \"dialog\" array", ordinal);
  }

  DialogueMeta meta;
  meta.id_prefix = std::string(SplitName(split)) + "-" + std::to_string(ordinal);
  meta.split = split;
  if (const auto topic = dialogue.find("chosen_topic");
      topic != dialogue.end() && topic->is_string()) {
    meta.topic = topic->get<std::string>();
  }

  std::vector<DialogueTurn> turns;
  for (const json& t : *dialog) {
    if (!t.is_object()) throw RecordError("dialog entry is not an object", ordinal);
    const auto speaker_it = t.find("speaker");
    const auto text_it = t.find("text");
    if (speaker_it == t.end() || !speaker_it->is_string() || text_it == t.end() ||
        !text_it->is_string()) {
      throw RecordError("dialog entry lacks string \"speaker\"/\"text\"", ordinal);
    }
    const auto speaker = ParseNativeSpeaker(speaker_it->get<std::string>());
    if (!speaker) {
      throw RecordError("unknown speaker label \"" + speaker_it->get<std::string>() + "\"",
                        ordinal);
    }
    DialogueTurn turn;
    turn.turn = {*speaker, text_it->get<std::string>()};
    if (*speaker == Speaker::kWizard) turn.evidence = CheckedSentence(t);
    turns.push_back(std::move(turn));
  }

  std::vector<GroundedExample> out = ExtractExamples(turns, meta);
  for (const GroundedExample& ex : out) {
    try {
      Validate(ex);
    } catch (const RecordError& e) {
      throw RecordError(std::string(e.what()) + " in " + ex.id, ordinal);
    }
  }
  return out;
}

std::vector<GroundedExample> IngestNative(std::istream& in, const IngestOptions& options) {
  const std::string content{std::istreambuf_iterator<char>(in),
                            std::istreambuf_iterator<char>()};
  std::vector<GroundedExample> out;
  auto take = [&](const json& dialogue, std::size_t ordinal) {
    try {
      auto examples = ExamplesFromNativeDialogue(dialogue, ordinal, options.native_split);
      std::move(examples.begin(), examples.end(), std::back_inserter(out));
    } catch (const Error& e) {
      Skip(options, e);
    }
  };

  const bool blank = content.find_first_not_of(" \t\r\n") == std::string::npos;
  if (blank) return out;

  json whole = json::parse(content, nullptr, false);
  if (!whole.is_discarded()) {
    if (whole.is_array()) {
      std::size_t ordinal = 0;
      for (const json& d : whole) take(d, ++ordinal);
    } else {
      take(whole, 1);
    }
    return out;
  }

  // One dialogue per line.
  std::istringstream lines(content);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json d = json::parse(line, nullptr, false);
    if (d.is_discarded()) {
      try {
        throw ParseError("malformed JSON", line_no);
      } catch (const Error& e) {
        Skip(options, e);
      }
      continue;
    }
    take(d, line_no);
  }
  return out;
}

}  // namespace faithctl::corpus::internal
