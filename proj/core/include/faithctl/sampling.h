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

#ifndef FAITHCTL_SAMPLING_H_
#define FAITHCTL_SAMPLING_H_

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "faithctl/control.h"
#include "faithctl/corpus.h"
#include "faithctl/entailment.h"
#include "faithctl/errors.h"
#include "faithctl/textmeasures.h"

namespace faithctl::sampling {

struct GenerationConfig {
  double nucleus_p = 0.6;
  std::size_t min_tokens = 5;
  std::size_t max_tokens = 64;
  std::optional<std::uint64_t> seed;

  // 0 < nucleus_p <= 1 and min_tokens <= max_tokens.
  void Validate() const;
};

// Keeps the smallest prefix of the probability-sorted distribution whose
// mass reaches p (ties keep the lower index first), zeroes the rest and
// renormalizes. Positions are preserved. When every entry is kept the input
// is returned unchanged. Throws InvalidArgument for an empty, negative or
// non-normalized (|sum - 1| > 1e-9) distribution, or p outside (0,1].
std::vector<double> NucleusFilter(std::span<const double> probs, double p);

// Index i such that the cumulative mass of probs[0..i] first exceeds u.
std::size_t SampleIndex(std::span<const double> probs, double u);

// ---------------------------------------------------------------------------
// Seeds

// Per-example stream: base_seed XOR ordinal.
std::uint64_t EpisodeSeed(std::uint64_t base_seed, std::uint64_t ordinal);
// Per-draw stream within an episode (splitmix64 of seed and draw index).
std::uint64_t DrawSeed(std::uint64_t episode_seed, std::size_t draw_index);

// Uniform double in [0,1) from the top 53 bits of a 64-bit word.
inline double UnitInterval(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// ---------------------------------------------------------------------------
// Generators

struct GenerationRequest {
  std::string_view input;
  const corpus::GroundedExample* example = nullptr;
  const GenerationConfig* config = nullptr;
  std::uint64_t episode_seed = 0;
  std::size_t draw_index = 1;  // 1-based
};

// Produces one candidate response. Implementations are safe to call from
// several threads at once.
class Generator {
 public:
  virtual ~Generator() = default;
  virtual std::string Generate(const GenerationRequest& request) const = 0;
};

struct RemoteGeneratorConfig {
  std::string endpoint;
  std::chrono::milliseconds timeout{60000};
  std::size_t max_retries = 2;
};

// POST {endpoint}/generate; the reply text is returned verbatim.
class RemoteGenerator final : public Generator {
 public:
  explicit RemoteGenerator(RemoteGeneratorConfig config);

  // Throws BackendUnavailable after retries, ProtocolError on a bad reply.
  std::string Generate(const GenerationRequest& request) const override;

  // GET {endpoint}/health; true when the reply is {"status":"ok"}.
  bool Healthy() const;

 private:
  RemoteGeneratorConfig config_;
};

struct SimulatedGeneratorConfig {
  // Probability that a draw is an extractive span of the evidence.
  double faithful_prob = 0.5;
  // First-person, off-evidence replies used for the other draws.
  std::vector<std::string> chitchat_templates = DefaultChitchat();
  text::FirstPersonLexicon lexicon = text::FirstPersonLexicon::Default();

  static std::vector<std::string> DefaultChitchat();
};

// Test double for a language model. Each draw flips a faithful_prob coin
// from its own seeded stream; faithful draws copy a contiguous span of the
// evidence tokens (first-person tokens removed), chit-chat draws pick a
// template. The pick among spans or templates is a nucleus-filtered draw
// with top_p from the generation config. Output is padded to min_tokens and
// is a pure function of (example, config, episode seed, draw index).
class SimulatedGenerator final : public Generator {
 public:
  explicit SimulatedGenerator(SimulatedGeneratorConfig config);

  std::string Generate(const GenerationRequest& request) const override;

  const SimulatedGeneratorConfig& config() const { return config_; }

 private:
  SimulatedGeneratorConfig config_;
};

// ---------------------------------------------------------------------------
// Resampling

enum class Criterion { kObjectiveVoice, kHighPrecision, kEntailed };

// "objective_voice" | "high_precision" | "entailed"
std::string_view CriterionName(Criterion c);
std::optional<Criterion> ParseCriterion(std::string_view name);

struct ResampleConfig {
  std::size_t max_draws = 10;
  std::set<Criterion> criteria = {Criterion::kObjectiveVoice, Criterion::kHighPrecision,
                                  Criterion::kEntailed};
  control::TercileBoundaries boundaries;
  // Prefix the decode-time control codes to the serialized input.
  bool use_control_codes = true;
  std::size_t token_budget = corpus::kDefaultTokenBudget;

  // max_draws >= 1, criteria non-empty.
  void Validate() const;
};

struct Candidate {
  std::string text;
  std::size_t draw_index = 0;  // 1-based
  std::map<Criterion, bool> satisfied;
  double lex_precision = 0.0;

  std::size_t SatisfiedCount() const;
  bool AllSatisfied() const;
};

struct ResampleResult {
  Candidate chosen;
  std::size_t draws_used = 0;
  bool accepted = false;
  bool fallback = false;
  // Every evaluated draw, in order.
  std::vector<Candidate> draws;
};

// Raised when the generator or judge fails mid-episode. Carries the draws
// evaluated so far.
class ResampleAborted : public Error {
 public:
  ResampleAborted(const std::string& what, nli::FailureKind cause,
                  std::vector<Candidate> partial);

  nli::FailureKind cause() const { return cause_; }
  const std::vector<Candidate>& partial_draws() const { return partial_; }

 private:
  nli::FailureKind cause_;
  std::vector<Candidate> partial_;
};

struct ResampleContext {
  const Generator& generator;
  const nli::EntailmentJudge& judge;
  const text::FirstPersonLexicon& lexicon;
};

// Evaluates the configured criteria for one candidate response.
Candidate EvaluateCandidate(std::string text, std::size_t draw_index,
                            const corpus::GroundedExample& example,
                            const ResampleConfig& config, const ResampleContext& ctx);

// Picks the fallback among failed draws: most satisfied criteria, then
// higher lexical precision, then the earlier draw.
const Candidate& SelectFallback(const std::vector<Candidate>& draws);

// Draws up to max_draws candidates and returns the first that satisfies
// every criterion (accepted). Otherwise returns SelectFallback(draws) with
// fallback set. Throws ResampleAborted if a backend fails.
ResampleResult Resample(const corpus::GroundedExample& example,
                        const GenerationConfig& gen_config,
                        const ResampleConfig& config, const ResampleContext& ctx,
                        std::uint64_t episode_seed);

}  // namespace faithctl::sampling

#endif  // FAITHCTL_SAMPLING_H_
