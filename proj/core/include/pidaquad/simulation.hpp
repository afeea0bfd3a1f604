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

#ifndef PIDAQUAD_SIMULATION_HPP
#define PIDAQUAD_SIMULATION_HPP

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "pidaquad/genetic_filter.hpp"
#include "pidaquad/pida_control.hpp"
#include "pidaquad/quad_dynamics.hpp"

namespace pidaquad::sim {

/// Per-channel values in (roll, pitch, yaw, altitude) order; angles in rad,
/// altitude in m.
using ChannelValues = std::array<double, kChannelCount>;

/// Gaussian sample stream, deterministic per seed.
class WhiteNoise {
 public:
  WhiteNoise(double mean, double sigma, std::uint64_t seed);
  double next();

 private:
  double mean_;
  double sigma_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// (x, y, up) of the spiral reference path.
Eigen::Vector3d spiral_reference(double t, double omega);
Eigen::Vector3d spiral_velocity(double t, double omega);
Eigen::Vector3d spiral_acceleration(double t, double omega);

inline constexpr double kDefaultSpiralOmega = 1.0 / (2.0 * std::numbers::pi);

enum class CommandKind { kHold, kStep, kSpiral };

struct CommandProfile {
  CommandKind kind = CommandKind::kHold;
  ChannelValues initial{};  // hold value, or pre-step value
  ChannelValues final{};    // post-step value
  double step_time = 2.0;
  double omega = kDefaultSpiralOmega;
  double altitude_offset = 0.0;  // spiral: altitude at t = 0
};

/// White-noise disturbance torque (N m) on an attitude channel, or force (N)
/// on the altitude channel, from `start_time` on.
struct DisturbanceSpec {
  bool enabled = false;
  Channel channel = Channel::kRoll;
  double start_time = 1.0;
  double mean = 0.0;
  double sigma = 1.0;
};

/// Small-angle position loop used by the spiral profile.
struct GuidanceGains {
  double k_pos = 0.05;                             // rad per m
  double k_vel = 0.08;                             // rad per m/s
  double max_tilt = 10.0 * std::numbers::pi / 180;  // rad
  bool feedforward = true;
};

/// Genetic-filter settings for one (value, rate) channel.
struct ChannelFilterSettings {
  Eigen::Vector2d init_spread{2e-4, 0.01};
  Eigen::Vector2d mutation_scale{4e-5, 0.002};
  Eigen::Vector2d process_noise{0.0, 0.0};
};

struct EstimatorSettings {
  bool enabled = false;
  bool filter_attitude = true;  // otherwise only altitude is filtered
  // Sized so a 60 s run at 1 ms stays within a few seconds of wall time.
  int population_size = 16;
  int max_generations = 3;
  double mutation_rate = 0.1;
  int elite_count = 1;
  gf::NoiseInjection noise_injection = gf::NoiseInjection::kPerGeneration;
  ChannelFilterSettings attitude;
  ChannelFilterSettings altitude{{0.005, 5e-4}, {0.001, 1e-4}, {0.0, 0.0}};
};

struct ControlLimits {
  double torque = 2.0;      // |u_phi|, |u_theta|, |u_psi| ceiling, N m
  double thrust_max = 0.0;  // 0 selects 4 * max_rotor_force()
};

struct Scenario {
  std::string name = "scenario";
  double duration = 10.0;
  double dt = 0.001;
  QuadState initial_state;
  CommandProfile commands;
  DisturbanceSpec disturbance;
  ChannelValues sensor_noise{0.01, 0.01, 0.01, 0.05};
  EstimatorSettings estimator;
  ChannelGains gains = default_gains();
  bool controller_enabled = true;
  GuidanceGains guidance;
  ControlLimits limits;
  QuadParams params;
  std::uint64_t seed = 1;
  /// |phi| or |theta| beyond this marks the run as diverged.
  double attitude_envelope = std::numbers::pi / 2;

  /// Throws std::invalid_argument.
  void validate() const;
  std::size_t steps() const;
};

struct StepRecord {
  double t = 0.0;
  QuadState state;
  ChannelValues measured{};
  ChannelValues estimated{};
  ChannelValues command{};
  ControlInput control;
  RotorForces forces;
  /// Spiral only: reference (x, y, altitude).
  std::optional<Eigen::Vector3d> position_reference;
};

struct TimeSeries {
  double dt = 0.0;
  std::vector<StepRecord> records;
};

struct AxisError {
  double rms = 0.0;
  double max_abs = 0.0;
  double final_mean = 0.0;  // mean |error| over the last 10%
};

struct RunMetrics {
  std::array<std::optional<StepMetrics>, kChannelCount> step;
  std::array<AxisError, kChannelCount> channel_error{};
  std::optional<AxisError> position_error;  // 3-D distance to the path
  bool diverged = false;
  std::string divergence_reason;
  double max_abs_channel_error() const;
};

struct RunResult {
  TimeSeries series;
  RunMetrics metrics;
};

/// Measurable outputs (phi, theta, psi, altitude) of a state.
ChannelValues outputs_of(const QuadState& state);

RunResult run_scenario(const Scenario& scenario);

/// RMS, max and final-window error of command minus true output per channel,
/// plus the position error when the series carries a path reference.
RunMetrics tracking_error(const TimeSeries& series);

/// Step metrics per channel for a step profile (channels without a step are
/// left empty).
std::array<std::optional<StepMetrics>, kChannelCount> step_response(
    const TimeSeries& series, const CommandProfile& profile, double band = 0.02);

/// Largest 3-D path error at or after `t0`; 0 if the series has no path.
double max_position_error_after(const TimeSeries& series, double t0);
double rms_position_error(const TimeSeries& series, double t0 = 0.0);

/// Largest |phi| or |theta| in the record, rad.
double max_tilt_excursion(const TimeSeries& series);

}  // namespace pidaquad::sim

#endif  // PIDAQUAD_SIMULATION_HPP
