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

#include "faithctl/sampling.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "http_json.h"

namespace faithctl::sampling {

void GenerationConfig::Validate() const {
  if (!(nucleus_p > 0.0 && nucleus_p <= 1.0)) {
    throw InvalidArgument("nucleus p must lie in (0,1]");
  }
  if (min_tokens > max_tokens) throw InvalidArgument("min_tokens exceeds max_tokens");
}

std::vector<double> NucleusFilter(std::span<const double> probs, double p) {
  if (probs.empty()) throw InvalidArgument("empty distribution");
  if (!(p > 0.0 && p <= 1.0)) throw InvalidArgument("nucleus p must lie in (0,1]");
  double sum = 0.0;
  for (double x : probs) {
    if (!(x >= 0.0) || !std::isfinite(x)) {
      throw InvalidArgument("distribution has a negative or non-finite entry");
    }
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw InvalidArgument("distribution does not sum to 1");

  std::vector<std::size_t> order(probs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return probs[a] > probs[b]; });

  // Cumulative sums pick up rounding error; 1e-12 slack keeps exact-looking
  // cut points such as 0.5 + 0.3 >= 0.8 on the intended side.
  constexpr double kSlack = 1e-12;
  std::size_t kept = 0;
  double mass = 0.0;
  while (kept < order.size()) {
    mass += probs[order[kept]];
    ++kept;
    if (mass >= p - kSlack) break;
  }
  if (kept == order.size()) return {probs.begin(), probs.end()};

  std::vector<double> out(probs.size(), 0.0);
  for (std::size_t k = 0; k < kept; ++k) out[order[k]] = probs[order[k]] / mass;
  return out;
}

std::size_t SampleIndex(std::span<const double> probs, double u) {
  double cumulative = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] <= 0.0) continue;
    cumulative += probs[i];
    last_positive = i;
    if (u < cumulative) return i;
  }
  return last_positive;
}

std::uint64_t EpisodeSeed(std::uint64_t base_seed, std::uint64_t ordinal) {
  return base_seed ^ ordinal;
}

std::uint64_t DrawSeed(std::uint64_t episode_seed, std::size_t draw_index) {
  std::uint64_t z = episode_seed + 0x9E3779B97F4A7C15ULL * (draw_index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

RemoteGenerator::RemoteGenerator(RemoteGeneratorConfig config) : config_(std::move(config)) {
  internal::ParseEndpoint(config_.endpoint);
}

std::string RemoteGenerator::Generate(const GenerationRequest& request) const {
  const GenerationConfig& cfg = *request.config;
  nlohmann::json body = {{"input", std::string(request.input)},
                         {"top_p", cfg.nucleus_p},
                         {"min_tokens", cfg.min_tokens},
                         {"max_tokens", cfg.max_tokens}};
  if (cfg.seed) {
    // JSON integers beyond 2^53 lose precision in many servers.
    body["seed"] = DrawSeed(request.episode_seed, request.draw_index) & ((1ULL << 53) - 1);
  }
  internal::JsonClient client(config_.endpoint, config_.timeout);
  return internal::WithRetries(config_.max_retries, "generation backend", [&] {
    const nlohmann::json reply = client.Post("/generate", body);
    const auto it = reply.find("text");
    if (it == reply.end() || !it->is_string()) {
      throw ProtocolError("/generate reply lacks a string \"text\"");
    }
    return it->get<std::string>();
  });
}

bool RemoteGenerator::Healthy() const {
  internal::JsonClient client(config_.endpoint, config_.timeout);
  try {
    const nlohmann::json reply = client.Get("/health");
    const auto it = reply.find("status");
    return it != reply.end() && it->is_string() && it->get<std::string>() == "ok";
  } catch (const NetworkError&) {
    return false;
  } catch (const ProtocolError&) {
    return false;
  }
}

std::string_view CriterionName(Criterion c) {
  switch (c) {
    case Criterion::kObjectiveVoice:
      return "objective_voice";
    case Criterion::kHighPrecision:
      return "high_precision";
    case Criterion::kEntailed:
      return "entailed";
  }
  return "objective_voice";
}

std::optional<Criterion> ParseCriterion(std::string_view name) {
  for (Criterion c :
       {Criterion::kObjectiveVoice, Criterion::kHighPrecision, Criterion::kEntailed}) {
    if (CriterionName(c) == name) return c;
  }
  return std::nullopt;
}

void ResampleConfig::Validate() const {
  if (max_draws < 1) throw InvalidArgument("max_draws must be at least 1");
  if (criteria.empty()) throw InvalidArgument("at least one criterion is required");
}

std::size_t Candidate::SatisfiedCount() const {
  return static_cast<std::size_t>(
      std::count_if(satisfied.begin(), satisfied.end(), [](const auto& kv) { return kv.second; }));
}

bool Candidate::AllSatisfied() const {
  return !satisfied.empty() && SatisfiedCount() == satisfied.size();
}

ResampleAborted::ResampleAborted(const std::string& what, nli::FailureKind cause,
                                 std::vector<Candidate> partial)
    : Error(what), cause_(cause), partial_(std::move(partial)) {}

Candidate EvaluateCandidate(std::string text, std::size_t draw_index,
                            const corpus::GroundedExample& example,
                            const ResampleConfig& config, const ResampleContext& ctx) {
  Candidate c;
  c.draw_index = draw_index;
  const text::TokenSeq tokens = text::Tokenize(text);
  c.lex_precision = text::LexicalOverlap(tokens, text::Tokenize(example.evidence)).precision;
  for (Criterion crit : config.criteria) {
    switch (crit) {
      case Criterion::kObjectiveVoice:
        c.satisfied[crit] = text::ObjectiveVoice(tokens, ctx.lexicon);
        break;
      case Criterion::kHighPrecision:
        c.satisfied[crit] = control::AssignPrecisionCode(c.lex_precision, config.boundaries) ==
                            control::PrecisionCode::kHigh;
        break;
      case Criterion::kEntailed:
        c.satisfied[crit] = ctx.judge.Judge(example.evidence, text).entailed;
        break;
    }
  }
  c.text = std::move(text);
  return c;
}

const Candidate& SelectFallback(const std::vector<Candidate>& draws) {
  if (draws.empty()) throw InvalidArgument("no draws to choose a fallback from");
  const Candidate* best = &draws.front();
  for (const Candidate& c : draws) {
    const std::size_t cs = c.SatisfiedCount();
    const std::size_t bs = best->SatisfiedCount();
    if (cs != bs) {
      if (cs > bs) best = &c;
    } else if (c.lex_precision != best->lex_precision) {
      if (c.lex_precision > best->lex_precision) best = &c;
    } else if (c.draw_index < best->draw_index) {
      best = &c;
    }
  }
  return *best;
}

ResampleResult Resample(const corpus::GroundedExample& example,
                        const GenerationConfig& gen_config, const ResampleConfig& config,
                        const ResampleContext& ctx, std::uint64_t episode_seed) {
  gen_config.Validate();
  config.Validate();

  std::optional<control::ControlCodes> codes;
  if (config.use_control_codes) codes = control::DecodeCodes();
  const std::string input = corpus::SerializeInput(example, codes, config.token_budget);

  ResampleResult result;
  for (std::size_t draw = 1; draw <= config.max_draws; ++draw) {
    GenerationRequest request{input, &example, &gen_config, episode_seed, draw};
    try {
      std::string text = ctx.generator.Generate(request);
      result.draws.push_back(EvaluateCandidate(std::move(text), draw, example, config, ctx));
    } catch (const BackendUnavailable& e) {
      throw ResampleAborted(e.what(), nli::FailureKind::kUnavailable, result.draws);
    } catch (const ProtocolError& e) {
      throw ResampleAborted(e.what(), nli::FailureKind::kProtocol, result.draws);
    }
    if (result.draws.back().AllSatisfied()) {
      result.chosen = result.draws.back();
      result.draws_used = draw;
      result.accepted = true;
      return result;
    }
  }
  result.draws_used = result.draws.size();
  result.chosen = SelectFallback(result.draws);
  result.fallback = true;
  return result;
}

}  // namespace faithctl::sampling
