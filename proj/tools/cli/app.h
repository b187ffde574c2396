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

#ifndef FAITHCTL_TOOLS_CLI_APP_H_
#define FAITHCTL_TOOLS_CLI_APP_H_

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace faithctl::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitBadInput = 2,  // usage, parse or record errors
  kExitUnavailable = 3,  // a remote backend could not be reached
  kExitProtocol = 4,  // a remote backend replied with a malformed message
};

// Every flag of every command. Commands read the fields they need.
struct ToolConfig {
  std::string data;
  std::string out;

  std::string judge = "heuristic";
  std::string judge_endpoint;
  double theta = 0.8;

  std::string gen = "simulated";
  std::string gen_endpoint;
  double top_p = 0.6;
  std::size_t min_tokens = 5;
  std::size_t max_tokens = 64;
  std::size_t max_draws = 10;
  std::size_t budget = 1024;
  std::string lexicon;
  std::uint64_t seed = 0;
  std::size_t jobs = 0;  // 0 selects the available parallelism
  bool skip_bad_records = false;

  // ingest
  std::string format = "native";
  std::string split;
  // augment, filter, resample
  std::string boundaries;
  std::string annotations;
  // resample
  double faithful_prob = 0.5;
  std::vector<std::string> criteria = {"objective_voice", "high_precision", "entailed"};
  bool no_control_codes = false;
  // evaluate
  std::string table;
  std::string rows_out;
  // correlate
  std::string measures;
};

int CmdIngest(const ToolConfig& cfg, std::ostream& out, std::ostream& err);
int CmdStats(const ToolConfig& cfg, std::ostream& out, std::ostream& err);
int CmdAnnotate(const ToolConfig& cfg, std::ostream& out, std::ostream& err);
int CmdTerciles(const ToolConfig& cfg, std::ostream& out, std::ostream& err);
int CmdAugment(const ToolConfig& cfg, std::ostream& out, std::ostream& err);
int CmdFilter(const ToolConfig& cfg, std::ostream& out, std::ostream& err);
int CmdResample(const ToolConfig& cfg, std::ostream& out, std::ostream& err);
int CmdEvaluate(const ToolConfig& cfg, std::ostream& out, std::ostream& err);
int CmdCorrelate(const ToolConfig& cfg, std::ostream& out, std::ostream& err);

// Parses `args` (without the program name) and runs the selected command.
// Errors are reported on `err` and mapped onto ExitCode values. Flags given
// on the command line win over FAITHCTL_* environment variables, which win
// over keys of the --config JSON file.
int Run(std::vector<std::string> args, std::ostream& out, std::ostream& err);
int Run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace faithctl::cli

#endif  // FAITHCTL_TOOLS_CLI_APP_H_
