/*
 Copyright 2026 The pidaquad Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#ifndef PIDAQUAD_TOOLS_COMMANDS_HPP
#define PIDAQUAD_TOOLS_COMMANDS_HPP

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "config.hpp"

namespace pidaquad::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfigError = 1,
  kExitDiverged = 2,
  kExitUnstable = 3,
};

struct CommandOptions {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;  // overrides every seed in the config
  int jobs = 1;
  std::optional<std::string> gains_path;  // gains.cfg replacing the config gains
  std::ostream* out = &std::cout;
  std::ostream* err = &std::cerr;
};

/// Loads the config and applies the command-line overrides.
RunConfig load_run_config(const CommandOptions& options);

/// Reads a `gains:` fragment (as written by the tune command).
ChannelGains load_gains_file(const std::string& path);

int cmd_simulate(const CommandOptions& options);
int cmd_tune(const CommandOptions& options);
int cmd_stability(const CommandOptions& options);
int cmd_filter_demo(const CommandOptions& options);

}  // namespace pidaquad::cli

#endif  // PIDAQUAD_TOOLS_COMMANDS_HPP
