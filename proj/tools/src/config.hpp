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

#ifndef PIDAQUAD_TOOLS_CONFIG_HPP
#define PIDAQUAD_TOOLS_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "pidaquad/sdsa.hpp"
#include "pidaquad/simulation.hpp"
#include "pidaquad/tuning.hpp"

namespace pidaquad::cli {

inline constexpr int kSchemaVersion = 1;

/// Malformed or invalid configuration. The message names the key and line.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct StabilitySettings {
  std::optional<double> altitude;      // hover point; defaults to the initial altitude
  std::optional<double> thrust;        // linearization thrust; defaults to m g
  int trajectory_runs = 0;             // noisy runs sampled for frozen-time spectra
  double sample_period = 0.5;          // s between Jacobian samples
};

struct LinearBenchmarkSettings {
  double a = 0.9;
  double process_std = 0.1;
  double measurement_std = 0.1;
  int steps = 200;
  std::uint64_t seed = 1;
  double init_spread = 0.1;
  double mutation_scale = 0.02;
};

struct AltitudeDemoSettings {
  double duration = 20.0;
  double dt = 0.01;
  double measurement_std = 0.05;
  double accel_std = 0.5;  // random vertical acceleration driving the truth
  std::uint64_t seed = 1;
};

struct FilterDemoSettings {
  LinearBenchmarkSettings linear;
  AltitudeDemoSettings altitude;
};

struct RunConfig {
  int schema_version = kSchemaVersion;
  std::string name = "run";
  sim::Scenario scenario;
  bool has_estimator = false;
  bool has_sdsa = false;
  sdsa::SdsaConfig sdsa;
  bool warm_start = true;
  TuningOptions tuning;
  StabilitySettings stability;
  bool has_filter_demo = false;
  FilterDemoSettings filter_demo;
};

/// Parses a config document. `source` labels diagnostics.
RunConfig parse_config(const std::string& text, const std::string& source = "<config>");
RunConfig load_config(const std::string& path);

/// Parses a document holding `gains:` (and optionally `schema_version:`),
/// starting from `base` for any channel or key it omits.
ChannelGains parse_gains_fragment(const std::string& text, const std::string& source,
                                  const ChannelGains& base);

/// `gains:` fragment in the config schema, full precision, fixed layout.
std::string gains_fragment(const ChannelGains& gains);

}  // namespace pidaquad::cli

#endif  // PIDAQUAD_TOOLS_CONFIG_HPP
