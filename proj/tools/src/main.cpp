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

#include <CLI11.hpp>

#include <cstdint>
#include <functional>
#include <string>

#include "commands.hpp"

namespace {

struct Flags {
  std::string config;
  std::string out = ".";
  std::uint64_t seed = 0;
  int jobs = 1;
  std::string gains;
};

CLI::App* add_command(CLI::App& app, const std::string& name, const std::string& help,
                      Flags& flags, bool with_gains) {
  CLI::App* sub = app.add_subcommand(name, help);
  sub->add_option("--config", flags.config, "Scenario config (.cfg)")->required()->check(
      CLI::ExistingFile);
  sub->add_option("--out", flags.out, "Output directory")->capture_default_str();
  sub->add_option("--seed", flags.seed, "Seed overriding every seed in the config");
  sub->add_option("--jobs", flags.jobs, "Concurrent workers")->check(CLI::PositiveNumber);
  if (with_gains) sub->add_option("--gains", flags.gains, "gains.cfg replacing the config gains");
  return sub;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace pidaquad::cli;
  CLI::App app{"PIDA quadcopter simulation, tuning, estimation and stability tool"};
  app.require_subcommand(1);
  Flags flags;
  CLI::App* simulate = add_command(app, "simulate", "Run one scenario and write CSV output",
                                   flags, true);
  CLI::App* tune = add_command(app, "tune", "Tune the PIDA gains on a step scenario", flags, true);
  CLI::App* stability =
      add_command(app, "stability", "Closed-loop eigenvalue and Lyapunov report", flags, true);
  CLI::App* filter_demo =
      add_command(app, "filter_demo", "Genetic filter against the Kalman oracle", flags, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfigError;
  }

  CommandOptions options;
  options.config_path = flags.config;
  options.out_dir = flags.out;
  options.jobs = flags.jobs;
  if (app.got_subcommand(simulate) ? simulate->count("--seed")
      : app.got_subcommand(tune)   ? tune->count("--seed")
      : app.got_subcommand(stability) ? stability->count("--seed")
                                      : filter_demo->count("--seed")) {
    options.seed = flags.seed;
  }
  if (!flags.gains.empty()) options.gains_path = flags.gains;

  if (app.got_subcommand(simulate)) return cmd_simulate(options);
  if (app.got_subcommand(tune)) return cmd_tune(options);
  if (app.got_subcommand(stability)) return cmd_stability(options);
  return cmd_filter_demo(options);
}
