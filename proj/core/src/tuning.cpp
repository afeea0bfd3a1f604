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

#include "pidaquad/tuning.hpp"

#include <stdexcept>

#include "pidaquad/linearization.hpp"
#include "pidaquad/stability.hpp"

namespace pidaquad {

Eigen::VectorXd gains_to_vector(const ChannelGains& gains) {
  Eigen::VectorXd x(kTuningDimension);
  for (std::size_t c = 0; c < kChannelCount; ++c) {
    const PidaGains& g = gains[c];
    x.segment(static_cast<Eigen::Index>(c) * kGainsPerChannel, kGainsPerChannel) << g.kp, g.ki,
        g.kd, g.ka, g.tf;
  }
  return x;
}

ChannelGains vector_to_gains(const Eigen::VectorXd& x) {
  if (x.size() != kTuningDimension) {
    throw std::invalid_argument("vector_to_gains: expected 20 entries");
  }
  ChannelGains gains;
  for (std::size_t c = 0; c < kChannelCount; ++c) {
    const Eigen::Index o = static_cast<Eigen::Index>(c) * kGainsPerChannel;
    gains[c] = PidaGains{x(o), x(o + 1), x(o + 2), x(o + 3), x(o + 4)};
  }
  return gains;
}

sdsa::Box tuning_bounds() {
  sdsa::Box box;
  box.lower = Eigen::VectorXd::Zero(kTuningDimension);
  box.upper = Eigen::VectorXd::Constant(kTuningDimension, 50.0);
  for (std::size_t c = 0; c < kChannelCount; ++c) {
    const Eigen::Index o = static_cast<Eigen::Index>(c) * kGainsPerChannel + 4;
    box.lower(o) = 0.001;
    box.upper(o) = 1.0;
  }
  return box;
}

double closed_loop_margin(const ChannelGains& gains, const QuadParams& params,
                          double hover_altitude) {
  const LinearModel plant = linearize(hover_state(hover_altitude), hover_input(params), params,
                                      LinearStateSet::kWithAltitude);
  const Eigen::MatrixXd Acl = stability::closed_loop_matrix(augment_tracking(plant), gains);
  return stability::max_real_part(stability::eigenvalues(Acl));
}

double step_tuning_cost(const sim::Scenario& step_scenario, const ChannelGains& gains,
                        const TuningOptions& options) {
  for (const PidaGains& g : gains) g.validate();
  if (options.require_hurwitz &&
      !(closed_loop_margin(gains, step_scenario.params,
                           step_scenario.initial_state.altitude()) < 0.0)) {
    return kDivergedPenalty;
  }
  sim::Scenario trial = step_scenario;
  trial.gains = gains;
  const sim::RunResult run = sim::run_scenario(trial);
  if (run.metrics.diverged) return kDivergedPenalty;
  double cost = 0.0;
  for (const auto& m : run.metrics.step) {
    if (m) cost += tuning_objective(*m, options.desired_overshoot, options.desired_settling);
  }
  return cost;
}

TuneResult tune_gains(const sim::Scenario& step_scenario, sdsa::SdsaConfig config,
                      bool warm_start, const TuningOptions& options) {
  if (step_scenario.commands.kind != sim::CommandKind::kStep) {
    throw std::invalid_argument("tune_gains: scenario must use a step profile");
  }
  if (!config.bounds.bounded()) config.bounds = tuning_bounds();
  if (warm_start) config.initial_point = config.bounds.clip(gains_to_vector(step_scenario.gains));
  const sdsa::Objective objective = [&](const Eigen::VectorXd& x) {
    return step_tuning_cost(step_scenario, vector_to_gains(x), options);
  };
  TuneResult out;
  out.search = sdsa::optimize(objective, config);
  out.gains = vector_to_gains(out.search.best_point);
  return out;
}

}  // namespace pidaquad
