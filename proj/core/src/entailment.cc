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

#include "faithctl/entailment.h"

#include <algorithm>
#include <atomic>
#include <thread>
#include <unordered_set>

#include "faithctl/errors.h"
#include "http_json.h"

namespace faithctl::nli {

std::string_view LabelName(NliLabel label) {
  switch (label) {
    case NliLabel::kEntailment:
      return "entailment";
    case NliLabel::kNeutral:
      return "neutral";
    case NliLabel::kContradiction:
      return "contradiction";
  }
  return "neutral";
}

std::optional<NliLabel> ParseLabel(std::string_view name) {
  if (name == "entailment") return NliLabel::kEntailment;
  if (name == "neutral") return NliLabel::kNeutral;
  if (name == "contradiction") return NliLabel::kContradiction;
  return std::nullopt;
}

EntailmentVerdict EntailmentVerdict::FromLabel(NliLabel label) {
  EntailmentVerdict v;
  v.raw_label = label;
  v.entailed = label == NliLabel::kEntailment;
  return v;
}

void JudgeConfig::Validate() const {
  if (!(theta >= 0.0 && theta <= 1.0)) {
    throw InvalidArgument("theta must lie in [0,1]");
  }
  if (backend == Backend::kRemote && (!endpoint || endpoint->empty())) {
    throw InvalidArgument("remote judge requires an endpoint");
  }
  if (max_in_flight == 0) {
    throw InvalidArgument("max_in_flight must be at least 1");
  }
}

std::optional<double> ContentCoverage(const text::TokenSeq& premise,
                                      const text::TokenSeq& hypothesis) {
  const auto& stop = FunctionWords();
  const std::unordered_set<std::string_view> premise_types(
      premise.tokens.begin(), premise.tokens.end());
  std::size_t content = 0;
  std::size_t covered = 0;
  for (const std::string& tok : hypothesis.tokens) {
    if (stop.count(tok) > 0) continue;
    ++content;
    if (premise_types.count(tok) > 0) ++covered;
  }
  if (content == 0) return std::nullopt;
  return static_cast<double>(covered) / static_cast<double>(content);
}

const EntailmentVerdict& BatchOutcome::ValueOrThrow(std::string_view context) const {
  if (verdict) return *verdict;
  std::string msg(context);
  if (!msg.empty()) msg += ": ";
  msg += error;
  switch (failure) {
    case FailureKind::kUnavailable:
      throw BackendUnavailable(msg);
    case FailureKind::kProtocol:
      throw ProtocolError(msg);
    default:
      throw Error(msg);
  }
}

namespace {

void RecordFailure(BatchOutcome& slot) {
  try {
    throw;
  } catch (const BackendUnavailable& e) {
    slot.failure = FailureKind::kUnavailable;
    slot.error = e.what();
  } catch (const ProtocolError& e) {
    slot.failure = FailureKind::kProtocol;
    slot.error = e.what();
  } catch (const Error& e) {
    slot.failure = FailureKind::kOther;
    slot.error = e.what();
  }
}

}  // namespace

std::vector<BatchOutcome> EntailmentJudge::JudgeBatch(
    const std::vector<std::pair<std::string, std::string>>& pairs) const {
  std::vector<BatchOutcome> out(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    try {
      out[i].verdict = Judge(pairs[i].first, pairs[i].second);
    } catch (const Error&) {
      RecordFailure(out[i]);
    }
  }
  return out;
}

HeuristicJudge::HeuristicJudge(double theta) : theta_(theta) {
  if (!(theta >= 0.0 && theta <= 1.0)) {
    throw InvalidArgument("theta must lie in [0,1]");
  }
}

EntailmentVerdict HeuristicJudge::Judge(std::string_view premise,
                                        std::string_view hypothesis) const {
  const auto coverage =
      ContentCoverage(text::Tokenize(premise), text::Tokenize(hypothesis));
  EntailmentVerdict v;
  v.score = coverage.value_or(0.0);
  v.entailed = coverage.has_value() && *coverage >= theta_;
  return v;
}

namespace {

EntailmentVerdict ParseNliReply(const nlohmann::json& body) {
  const auto label_it = body.find("label");
  if (label_it == body.end() || !label_it->is_string()) {
    throw ProtocolError("/nli reply lacks a string \"label\"");
  }
  const auto label = ParseLabel(label_it->get<std::string>());
  if (!label) {
    throw ProtocolError("/nli reply has unknown label: " + label_it->get<std::string>());
  }
  EntailmentVerdict v = EntailmentVerdict::FromLabel(*label);

  if (const auto probs_it = body.find("probs"); probs_it != body.end()) {
    const nlohmann::json& p = *probs_it;
    const char* keys[] = {"entailment", "neutral", "contradiction"};
    if (!p.is_object()) throw ProtocolError("/nli \"probs\" is not an object");
    for (const char* k : keys) {
      if (!p.contains(k) || !p[k].is_number()) {
        throw ProtocolError(std::string("/nli \"probs\" lacks numeric \"") + k + "\"");
      }
    }
    LabelProbs probs{p["entailment"].get<double>(), p["neutral"].get<double>(),
                     p["contradiction"].get<double>()};
    v.score = probs.entailment;
    v.probs = probs;
  }
  return v;
}

EntailmentVerdict JudgeWith(internal::JsonClient& client, const JudgeConfig& config,
                            std::string_view premise, std::string_view hypothesis) {
  const nlohmann::json request = {{"premise", std::string(premise)},
                                  {"hypothesis", std::string(hypothesis)}};
  return internal::WithRetries(config.max_retries, "entailment backend", [&] {
    return ParseNliReply(client.Post("/nli", request));
  });
}

}  // namespace

RemoteJudge::RemoteJudge(JudgeConfig config) : config_(std::move(config)) {
  config_.backend = Backend::kRemote;
  config_.Validate();
  internal::ParseEndpoint(*config_.endpoint);
}

EntailmentVerdict RemoteJudge::Judge(std::string_view premise,
                                     std::string_view hypothesis) const {
  internal::JsonClient client(*config_.endpoint, config_.timeout);
  return JudgeWith(client, config_, premise, hypothesis);
}

std::vector<BatchOutcome> RemoteJudge::JudgeBatch(
    const std::vector<std::pair<std::string, std::string>>& pairs) const {
  std::vector<BatchOutcome> out(pairs.size());
  std::atomic<std::size_t> next{0};
  // Once the backend is declared unavailable the remaining pairs fail fast
  // instead of each waiting out its own retries.
  std::atomic<bool> backend_down{false};
  auto worker = [&] {
    internal::JsonClient client(*config_.endpoint, config_.timeout);
    for (std::size_t i = next++; i < pairs.size(); i = next++) {
      if (backend_down) {
        out[i].failure = FailureKind::kUnavailable;
        out[i].error = "entailment backend unavailable (earlier request failed)";
        continue;
      }
      try {
        out[i].verdict = JudgeWith(client, config_, pairs[i].first, pairs[i].second);
      } catch (const Error&) {
        RecordFailure(out[i]);
        if (out[i].failure == FailureKind::kUnavailable) backend_down = true;
      }
    }
  };
  {
    const std::size_t n_workers = std::min(config_.max_in_flight, pairs.size());
    std::vector<std::jthread> workers;
    workers.reserve(n_workers);
    for (std::size_t w = 0; w < n_workers; ++w) workers.emplace_back(worker);
  }
  return out;
}

std::unique_ptr<EntailmentJudge> MakeJudge(const JudgeConfig& config) {
  config.Validate();
  if (config.backend == Backend::kRemote) return std::make_unique<RemoteJudge>(config);
  return std::make_unique<HeuristicJudge>(config.theta);
}

}  // namespace faithctl::nli
