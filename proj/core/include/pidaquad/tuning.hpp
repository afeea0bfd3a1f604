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

#ifndef PIDAQUAD_TUNING_HPP
#define PIDAQUAD_TUNING_HPP

#include <Eigen/Dense>

#include "pidaquad/pida_control.hpp"
#include "pidaquad/sdsa.hpp"
#include "pidaquad/simulation.hpp"

namespace pidaquad {

/// Five entries per channel: kp, ki, kd, ka, tf.
inline constexpr Eigen::Index kGainsPerChannel = 5;
inline constexpr Eigen::Index kTuningDimension = kGainsPerChannel * kChannelCount;

Eigen::VectorXd gains_to_vector(const ChannelGains& gains);
ChannelGains vector_to_gains(const Eigen::VectorXd& x);

/// Gains in [0, 50], filter time constants in [0.001, 1].
sdsa::Box tuning_bounds();

/// Cost charged when the trial diverges.
inline constexpr double kDivergedPenalty = 1e9;

struct TuningOptions {
  double desired_overshoot = 5.0;  // percent
  double desired_settling = 2.0;   // s
  /// Charge kDivergedPenalty when the hover-linearized closed loop is not
  /// Hurwitz, so saturation cannot mask a linearly unstable design.
  bool require_hurwitz = true;
};

/// Max real part of the hover-linearized closed loop for these gains.
double closed_loop_margin(const ChannelGains& gains, const QuadParams& params,
                          double hover_altitude);

/// Sum of the per-channel step objective over the channels that carry a step.
double step_tuning_cost(const sim::Scenario& step_scenario, const ChannelGains& gains,
                        const TuningOptions& options = {});

struct TuneResult {
  ChannelGains gains;
  sdsa::SdsaResult search;
};

/// Tunes all channels jointly on a step scenario. The scenario's gains seed
/// the search when `warm_start` is set.
TuneResult tune_gains(const sim::Scenario& step_scenario, sdsa::SdsaConfig config,
                      bool warm_start = true, const TuningOptions& options = {});

}  // namespace pidaquad

#endif  // PIDAQUAD_TUNING_HPP
