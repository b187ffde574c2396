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

#ifndef FAITHCTL_TESTS_SUPPORT_SCRIPTED_H_
#define FAITHCTL_TESTS_SUPPORT_SCRIPTED_H_

#include <atomic>
#include <stdexcept>
#include <string>
#include <vector>

#include "faithctl/entailment.h"
#include "faithctl/sampling.h"

namespace faithctl::testing {

// Returns script[draw_index - 1]; counts calls.
class ScriptedGenerator final : public sampling::Generator {
 public:
  explicit ScriptedGenerator(std::vector<std::string> script) : script_(std::move(script)) {}

  std::string Generate(const sampling::GenerationRequest& request) const override {
    ++calls_;
    if (request.draw_index == 0 || request.draw_index > script_.size()) {
      throw std::out_of_range("scripted generator ran past its script");
    }
    return script_[request.draw_index - 1];
  }

  int calls() const { return calls_; }

 private:
  std::vector<std::string> script_;
  mutable std::atomic<int> calls_{0};
};

// Entailed iff the hypothesis contains `marker`.
class MarkerJudge final : public nli::EntailmentJudge {
 public:
  explicit MarkerJudge(std::string marker) : marker_(std::move(marker)) {}

  nli::EntailmentVerdict Judge(std::string_view, std::string_view hypothesis) const override {
    nli::EntailmentVerdict v;
    v.entailed = hypothesis.find(marker_) != std::string_view::npos;
    v.score = v.entailed ? 1.0 : 0.0;
    return v;
  }

 private:
  std::string marker_;
};

}  // namespace faithctl::testing

#endif  // FAITHCTL_TESTS_SUPPORT_SCRIPTED_H_
