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

#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "faithctl/entailment.h"
#include "faithctl/sampling.h"
#include "faithctl/textmeasures.h"

namespace faithctl {
namespace {

void BM_NucleusFilter(benchmark::State& state) {
  std::mt19937_64 rng(4);
  std::exponential_distribution<double> e(1.0);
  std::vector<double> probs(static_cast<std::size_t>(state.range(0)));
  double sum = 0;
  for (double& p : probs) sum += p = e(rng);
  for (double& p : probs) p /= sum;
  for (auto _ : state) benchmark::DoNotOptimize(sampling::NucleusFilter(probs, 0.6));
}
BENCHMARK(BM_NucleusFilter)->Arg(64)->Arg(1024)->Arg(32768);

corpus::GroundedExample Example() {
  corpus::GroundedExample ex;
  ex.id = "bench";
  ex.topic = "Pug";
  ex.history = {{corpus::Speaker::kApprentice, "tell me about pugs"}};
  ex.evidence =
      "The pug is a breed of dog with a wrinkly, short-muzzled face and curled tail. "
      "The breed has a fine, glossy coat that comes in a variety of colors.";
  ex.response = "pugs have a curled tail";
  return ex;
}

void BM_SimulatedResample(benchmark::State& state) {
  sampling::SimulatedGeneratorConfig sc;
  sc.faithful_prob = 0.3;
  const sampling::SimulatedGenerator gen(sc);
  const nli::HeuristicJudge judge(0.8);
  const auto lexicon = text::FirstPersonLexicon::Default();
  const sampling::ResampleContext ctx{gen, judge, lexicon};
  sampling::ResampleConfig rs;
  rs.max_draws = static_cast<std::size_t>(state.range(0));
  rs.boundaries = {0.5, 0.85, 3};
  const auto ex = Example();
  std::uint64_t ordinal = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sampling::Resample(ex, sampling::GenerationConfig{}, rs, ctx,
                                                sampling::EpisodeSeed(7, ordinal++)));
  }
}
BENCHMARK(BM_SimulatedResample)->Arg(1)->Arg(10);

}  // namespace
}  // namespace faithctl
