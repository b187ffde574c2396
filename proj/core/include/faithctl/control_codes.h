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

#ifndef FAITHCTL_CONTROL_CODES_H_
#define FAITHCTL_CONTROL_CODES_H_

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace faithctl::control {

enum class VoiceCode { kFirstPerson, kNoFirstPerson };
enum class PrecisionCode { kLow, kMed, kHigh };
enum class EntailCode { kEntailed, kNonEntailed };

// "<first-person>" / "<no-first-person>"
std::string_view Token(VoiceCode code);
// "<low-prec>" / "<med-prec>" / "<high-prec>"
std::string_view Token(PrecisionCode code);
// "<entailed>" / "<non-entailed>"
std::string_view Token(EntailCode code);

std::optional<VoiceCode> ParseVoiceCode(std::string_view token);
std::optional<PrecisionCode> ParsePrecisionCode(std::string_view token);
std::optional<EntailCode> ParseEntailCode(std::string_view token);

// Control tokens prepended to the model input, always emitted in the order
// voice, precision, entailment.
struct ControlCodes {
  VoiceCode voice = VoiceCode::kNoFirstPerson;
  PrecisionCode precision = PrecisionCode::kHigh;
  EntailCode entailment = EntailCode::kEntailed;

  std::array<std::string_view, 3> Tokens() const {
    return {Token(voice), Token(precision), Token(entailment)};
  }
  // Tokens joined by single spaces.
  std::string Prefix() const;

  bool operator==(const ControlCodes&) const = default;
};

// The codes used at generation time: objective voice, high precision,
// entailed.
constexpr ControlCodes DecodeCodes() {
  return ControlCodes{VoiceCode::kNoFirstPerson, PrecisionCode::kHigh,
                      EntailCode::kEntailed};
}

}  // namespace faithctl::control

#endif  // FAITHCTL_CONTROL_CODES_H_
