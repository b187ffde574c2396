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

#ifndef FAITHCTL_SRC_NATIVE_DATASET_H_
#define FAITHCTL_SRC_NATIVE_DATASET_H_

#include <istream>
#include <optional>
#include <string_view>
#include <vector>

#include "faithctl/corpus.h"
#include "json.hpp"

namespace faithctl::corpus::internal {

// "0_Wizard", "1_Apprentice", "Wizard", ... (case-insensitive role suffix).
std::optional<Speaker> ParseNativeSpeaker(std::string_view tag);

// Maps one dialogue record onto examples. `ordinal` is 1-based and is used
// for ids and error positions.
std::vector<GroundedExample> ExamplesFromNativeDialogue(const nlohmann::json& dialogue,
                                                        std::size_t ordinal, Split split);

std::vector<GroundedExample> IngestNative(std::istream& in, const IngestOptions& options);

}  // namespace faithctl::corpus::internal

#endif  // FAITHCTL_SRC_NATIVE_DATASET_H_
