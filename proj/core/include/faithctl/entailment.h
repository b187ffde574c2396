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

#ifndef FAITHCTL_ENTAILMENT_H_
#define FAITHCTL_ENTAILMENT_H_

#include <chrono>
#include <cstddef>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "faithctl/textmeasures.h"

namespace faithctl::nli {

enum class NliLabel { kEntailment, kNeutral, kContradiction };

std::string_view LabelName(NliLabel label);
// "entailment" | "neutral" | "contradiction"; nullopt otherwise.
std::optional<NliLabel> ParseLabel(std::string_view name);

struct LabelProbs {
  double entailment = 0.0;
  double neutral = 0.0;
  double contradiction = 0.0;
};

// entailed == (raw_label == kEntailment) whenever raw_label is set. Neutral
// and contradiction both collapse to non-entailed.
struct EntailmentVerdict {
  bool entailed = false;
  std::optional<NliLabel> raw_label;
  std::optional<double> score;
  std::optional<LabelProbs> probs;

  static EntailmentVerdict FromLabel(NliLabel label);
};

enum class Backend { kHeuristic, kRemote };

struct JudgeConfig {
  Backend backend = Backend::kHeuristic;
  double theta = 0.8;
  std::optional<std::string> endpoint;
  std::chrono::milliseconds timeout{30000};
  std::size_t max_in_flight = 8;
  std::size_t max_retries = 2;

  // Throws InvalidArgument on theta outside [0,1], a remote backend without
  // endpoint, or max_in_flight == 0.
  void Validate() const;
};

// Bundled function-word list removed before heuristic coverage is computed.
const std::set<std::string, std::less<>>& FunctionWords();

// Hypothesis content tokens (stoplist removed) covered by the premise, as a
// fraction. nullopt when the hypothesis has no content tokens.
std::optional<double> ContentCoverage(const text::TokenSeq& premise,
                                      const text::TokenSeq& hypothesis);

enum class FailureKind { kNone, kUnavailable, kProtocol, kOther };

// One slot of a batch result. Either verdict is set, or failure/error say
// why it is not.
struct BatchOutcome {
  std::optional<EntailmentVerdict> verdict;
  FailureKind failure = FailureKind::kNone;
  std::string error;

  bool ok() const { return verdict.has_value(); }
  // Returns the verdict or rethrows the failure as BackendUnavailable /
  // ProtocolError / Error, prefixing `context` to the message.
  const EntailmentVerdict& ValueOrThrow(std::string_view context) const;
};

class EntailmentJudge {
 public:
  virtual ~EntailmentJudge() = default;

  // premise = evidence, hypothesis = candidate response.
  virtual EntailmentVerdict Judge(std::string_view premise,
                                  std::string_view hypothesis) const = 0;

  // Order-preserving; element i equals Judge(pairs[i]). A failing element
  // carries its error without affecting the others.
  virtual std::vector<BatchOutcome> JudgeBatch(
      const std::vector<std::pair<std::string, std::string>>& pairs) const;
};

// Deterministic lexical-coverage proxy: entailed iff ContentCoverage >= theta.
class HeuristicJudge final : public EntailmentJudge {
 public:
  explicit HeuristicJudge(double theta = 0.8);

  EntailmentVerdict Judge(std::string_view premise,
                          std::string_view hypothesis) const override;

  double theta() const { return theta_; }

 private:
  double theta_;
};

// Client for POST {endpoint}/nli. Shareable across threads; JudgeBatch keeps
// at most max_in_flight requests outstanding. After one element of a batch
// exhausts its retries, the elements not yet sent are failed as unavailable
// without contacting the backend.
class RemoteJudge final : public EntailmentJudge {
 public:
  explicit RemoteJudge(JudgeConfig config);

  // Throws BackendUnavailable after retries, ProtocolError on a malformed
  // reply.
  EntailmentVerdict Judge(std::string_view premise,
                          std::string_view hypothesis) const override;

  std::vector<BatchOutcome> JudgeBatch(
      const std::vector<std::pair<std::string, std::string>>& pairs) const override;

 private:
  JudgeConfig config_;
};

std::unique_ptr<EntailmentJudge> MakeJudge(const JudgeConfig& config);

}  // namespace faithctl::nli

#endif  // FAITHCTL_ENTAILMENT_H_
