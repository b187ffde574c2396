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
#include <random>

#include "faithctl/sampling.h"

namespace faithctl::sampling {
namespace {

// Harmonic weights over pool order, normalized.
std::vector<double> RankWeights(std::size_t n) {
  std::vector<double> w(n);
  double sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    w[k] = 1.0 / static_cast<double>(k + 1);
    sum += w[k];
  }
  for (double& x : w) x /= sum;
  return w;
}

struct Span {
  std::size_t begin;
  std::size_t length;
};

// Longest spans first, earlier starts first.
std::vector<Span> SpanPool(std::size_t n_tokens, std::size_t min_len, std::size_t max_len) {
  std::vector<Span> pool;
  if (n_tokens == 0) return pool;
  const std::size_t longest = std::min(n_tokens, std::max<std::size_t>(max_len, 1));
  const std::size_t shortest = std::clamp<std::size_t>(min_len, 1, longest);
  for (std::size_t len = longest; len >= shortest; --len) {
    for (std::size_t b = 0; b + len <= n_tokens; ++b) pool.push_back({b, len});
    if (len == 1) break;
  }
  return pool;
}

std::string Finish(std::vector<std::string> tokens, std::size_t min_tokens,
                   const std::vector<std::string>& padding) {
  for (std::size_t i = 0; tokens.size() < min_tokens && !padding.empty(); ++i) {
    tokens.push_back(padding[i % padding.size()]);
  }
  return text::Join(text::TokenSeq{std::move(tokens)}) + ".";
}

}  // namespace

std::vector<std::string> SimulatedGeneratorConfig::DefaultChitchat() {
  return {
      "i love that so much , my family goes every summer",
      "i think it is great , my friends and i talk about it a lot",
      "oh i have never tried that myself but i would like to",
      "i'm not sure , i just remember my dad telling me about it",
      "that sounds fun , i've always wanted to see it in person",
      "honestly i prefer staying home with my cat on weekends",
  };
}

SimulatedGenerator::SimulatedGenerator(SimulatedGeneratorConfig config)
    : config_(std::move(config)) {
  if (!(config_.faithful_prob >= 0.0 && config_.faithful_prob <= 1.0)) {
    throw InvalidArgument("faithful_prob must lie in [0,1]");
  }
  if (config_.chitchat_templates.empty()) {
    throw InvalidArgument("simulated generator needs at least one chit-chat template");
  }
  for (const std::string& t : config_.chitchat_templates) {
    if (text::ObjectiveVoice(text::Tokenize(t), config_.lexicon)) {
      throw InvalidArgument("chit-chat template lacks a first-person token: " + t);
    }
  }
}

std::string SimulatedGenerator::Generate(const GenerationRequest& request) const {
  const GenerationConfig& cfg = *request.config;
  std::mt19937_64 rng(DrawSeed(request.episode_seed, request.draw_index));
  const bool faithful = UnitInterval(rng()) < config_.faithful_prob;
  const double pick = UnitInterval(rng());

  if (faithful && request.example != nullptr) {
    std::vector<std::string> evidence;
    for (std::string& tok : text::Tokenize(request.example->evidence).tokens) {
      if (!config_.lexicon.Contains(tok)) evidence.push_back(std::move(tok));
    }
    const auto pool = SpanPool(evidence.size(), cfg.min_tokens, cfg.max_tokens);
    if (!pool.empty()) {
      const auto probs = NucleusFilter(RankWeights(pool.size()), cfg.nucleus_p);
      const Span span = pool[SampleIndex(probs, pick)];
      std::vector<std::string> tokens(evidence.begin() + span.begin,
                                      evidence.begin() + span.begin + span.length);
      const std::vector<std::string> padding = tokens;
      return Finish(std::move(tokens), cfg.min_tokens, padding);
    }
  }

  const auto probs = NucleusFilter(RankWeights(config_.chitchat_templates.size()),
                                   cfg.nucleus_p);
  const std::string& tmpl = config_.chitchat_templates[SampleIndex(probs, pick)];
  // Templates are not truncated to max_tokens: that could cut away the
  // first-person token every chit-chat draw is meant to carry.
  return Finish(text::Tokenize(tmpl).tokens, cfg.min_tokens, {"honestly", "i", "guess"});
}

}  // namespace faithctl::sampling
