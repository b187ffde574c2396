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

#include "cli/app.h"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>

#include "CLI11.hpp"
#include "faithctl/errors.h"
#include "json.hpp"

namespace faithctl::cli {
namespace {

using nlohmann::json;
using CommandFn = int (*)(const ToolConfig&, std::ostream&, std::ostream&);

std::string EnvName(const std::string& flag) {
  std::string name = "FAITHCTL_";
  for (char c : flag.substr(2)) {
    name += c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  }
  return name;
}

// Options every command accepts.
void AddCommon(CLI::App* sub, ToolConfig& cfg, std::string& config_path) {
  sub->add_option("--data", cfg.data, "Input file");
  sub->add_option("--out", cfg.out, "Output file, replaced atomically");
  sub->add_option("--config", config_path,
                  "JSON object of flag values; command line and FAITHCTL_* variables win");
  sub->add_option("--judge", cfg.judge, "Entailment backend")
      ->check(CLI::IsMember({"heuristic", "remote"}))
      ->capture_default_str();
  sub->add_option("--judge-endpoint", cfg.judge_endpoint,
                  "Base URL of the NLI service, e.g. http://127.0.0.1:8000");
  sub->add_option("--theta", cfg.theta, "Heuristic judge coverage threshold")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  sub->add_option("--lexicon", cfg.lexicon,
                  "First-person word list, one per line (default: i me my mine myself "
                  "i'm i've i'll i'd)");
  sub->add_option("--budget", cfg.budget, "Whitespace-token budget of serialized inputs")
      ->capture_default_str();
  sub->add_option("--seed", cfg.seed, "Base seed; episode i uses seed XOR i")
      ->capture_default_str();
  sub->add_option("--jobs", cfg.jobs, "Worker threads (default: available parallelism)")
      ->check(CLI::NonNegativeNumber);
  sub->add_flag("--skip-bad-records", cfg.skip_bad_records,
                "Downgrade malformed or invalid records to warnings");
}

void AddGeneration(CLI::App* sub, ToolConfig& cfg) {
  sub->add_option("--gen", cfg.gen, "Generator backend")
      ->check(CLI::IsMember({"simulated", "remote"}))
      ->capture_default_str();
  sub->add_option("--gen-endpoint", cfg.gen_endpoint, "Base URL of the generation service");
  sub->add_option("--top-p", cfg.top_p, "Nucleus sampling mass")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  sub->add_option("--min-tokens", cfg.min_tokens, "Minimum generated tokens")
      ->capture_default_str();
  sub->add_option("--max-tokens", cfg.max_tokens, "Maximum generated tokens")
      ->capture_default_str();
  sub->add_option("--max-draws", cfg.max_draws, "Resampling budget d")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sub->add_option("--faithful-prob", cfg.faithful_prob,
                  "Simulated generator: probability a draw copies evidence")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  sub->add_option("--criteria", cfg.criteria,
                  "Acceptance criteria (objective_voice high_precision entailed)")
      ->check(CLI::IsMember({"objective_voice", "high_precision", "entailed"}))
      ->capture_default_str();
  sub->add_flag("--no-control-codes", cfg.no_control_codes,
                "Serialize inputs without the decode-time control codes");
  sub->add_option("--boundaries", cfg.boundaries,
                  "Tercile boundaries JSON (needed by high_precision)");
}

void AttachEnv(CLI::App* sub) {
  for (CLI::Option* opt : sub->get_options()) {
    for (const std::string& name : opt->get_lnames()) {
      if (name == "help" || name == "config") continue;
      opt->envname(EnvName("--" + name));
    }
  }
}

bool GivenOnCommandLine(const std::vector<std::string>& args, const std::string& flag) {
  return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
    return a == flag || a.starts_with(flag + "=");
  });
}

std::string Scalar(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_unsigned()) return std::to_string(v.get<std::uint64_t>());
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  if (v.is_number_float()) return json(v).dump();
  throw InvalidArgument("config values must be strings, numbers, booleans or lists");
}

// Appends config-file values for flags set neither on the command line nor
// in the environment.
void ApplyConfigFile(std::vector<std::string>& args, const CLI::App& sub,
                     const std::set<std::string>& known) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].starts_with("--config=")) path = args[i].substr(9);
  }
  if (path.empty()) return;
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config file: " + path);
  const json obj = json::parse(in, nullptr, false);
  if (obj.is_discarded() || !obj.is_object()) {
    throw ParseError("config file is not a JSON object: " + path, 0);
  }
  const std::vector<std::string> original = args;
  for (const auto& [key, value] : obj.items()) {
    std::string flag = "--" + key;
    std::replace(flag.begin(), flag.end(), '_', '-');
    if (!known.contains(flag)) throw InvalidArgument("unknown config key: " + key);
    // Keys meant for other commands are ignored.
    if (sub.get_option_no_throw(flag) == nullptr) continue;
    if (GivenOnCommandLine(original, flag) || std::getenv(EnvName(flag).c_str()) != nullptr) {
      continue;
    }
    if (value.is_boolean()) {
      if (value.get<bool>()) args.push_back(flag);
    } else if (value.is_array()) {
      args.push_back(flag);
      for (const json& v : value) args.push_back(Scalar(v));
    } else if (!value.is_null()) {
      args.push_back(flag);
      args.push_back(Scalar(value));
    }
  }
}

}  // namespace

int Run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  ToolConfig cfg;
  std::string config_path;
  CLI::App app{"Knowledge-grounded dialogue faithfulness toolkit", "faithctl"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "faithctl 0.1.0");

  struct Command {
    const char* name;
    const char* help;
    CommandFn fn;
  };
  const Command commands[] = {
      {"ingest", "Convert a dialogue dataset file to canonical JSONL", CmdIngest},
      {"stats", "Corpus statistics: first person, lexical precision, entailment", CmdStats},
      {"annotate", "Measure every gold response; writes annotation JSONL", CmdAnnotate},
      {"terciles", "Fit lexical-precision tercile boundaries on training annotations",
       CmdTerciles},
      {"augment", "Prefix control codes to training inputs", CmdAugment},
      {"filter", "Keep examples whose codes match the faithful decode codes", CmdFilter},
      {"resample", "Draw responses until all criteria hold or the budget is spent",
       CmdResample},
      {"evaluate", "BLEU-4 and faithfulness measures of system outputs", CmdEvaluate},
      {"correlate", "Correlate automatic measures with human ratings", CmdCorrelate},
  };

  std::map<CLI::App*, CommandFn> dispatch;
  std::set<std::string> known_flags;
  for (const Command& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    AddCommon(sub, cfg, config_path);
    const std::string name = c.name;
    if (name == "ingest") {
      sub->add_option("--format", cfg.format, "Input format")
          ->check(CLI::IsMember({"native", "canonical"}))
          ->capture_default_str();
      sub->add_option("--split", cfg.split,
                      "Split of native records (default: inferred from the file name)");
    } else if (name == "augment" || name == "filter") {
      sub->add_option("--boundaries", cfg.boundaries,
                      name == "augment"
                          ? "Tercile boundaries JSON (default: fit on the input)"
                          : "Tercile boundaries JSON");
      sub->add_option("--annotations", cfg.annotations,
                      "Reuse measures from an annotate run instead of recomputing");
    } else if (name == "resample") {
      AddGeneration(sub, cfg);
    } else if (name == "evaluate") {
      sub->add_option("--table", cfg.table, "Also write an aligned text table here");
      sub->add_option("--rows-out", cfg.rows_out, "Also write per-row measures JSONL here");
    } else if (name == "correlate") {
      sub->add_option("--measures", cfg.measures, "Per-item measures (annotation JSONL)");
    }
    AttachEnv(sub);
    for (const CLI::Option* opt : sub->get_options()) {
      for (const std::string& n : opt->get_lnames()) known_flags.insert("--" + n);
    }
    dispatch[sub] = c.fn;
  }

  CLI::App* selected = nullptr;
  try {
    for (const std::string& a : args) {
      if (CLI::App* sub = app.get_subcommand_no_throw(a)) {
        selected = sub;
        break;
      }
    }
    if (selected != nullptr) ApplyConfigFile(args, *selected, known_flags);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitBadInput;
  } catch (const Error& e) {
    err << "faithctl: error: " << e.what() << "\n";
    return kExitBadInput;
  }

  for (const auto& [sub, fn] : dispatch) {
    if (!sub->parsed()) continue;
    const std::string prefix = "faithctl " + sub->get_name() + ": error: ";
    try {
      return fn(cfg, out, err);
    } catch (const ParseError& e) {
      err << prefix << e.what() << "\n";
      return kExitBadInput;
    } catch (const RecordError& e) {
      err << prefix << e.what() << "\n";
      return kExitBadInput;
    } catch (const InvalidArgument& e) {
      err << prefix << e.what() << "\n";
      return kExitBadInput;
    } catch (const BackendUnavailable& e) {
      err << prefix << e.what() << "\n";
      return kExitUnavailable;
    } catch (const NetworkError& e) {
      err << prefix << e.what() << "\n";
      return kExitUnavailable;
    } catch (const ProtocolError& e) {
      err << prefix << e.what() << "\n";
      return kExitProtocol;
    } catch (const std::exception& e) {
      err << prefix << e.what() << "\n";
      return kExitFailure;
    }
  }
  return kExitFailure;
}

int Run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  return Run(std::vector<std::string>(argv + 1, argv + argc), out, err);
}

}  // namespace faithctl::cli
