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

#ifndef PIDAQUAD_LINEARIZATION_HPP
#define PIDAQUAD_LINEARIZATION_HPP

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

#include "pidaquad/quad_dynamics.hpp"

namespace pidaquad {

class NotEquilibriumError : public std::invalid_argument {
 public:
  explicit NotEquilibriumError(const std::string& what) : std::invalid_argument(what) {}
};

/**
 * State subset used for linear analysis.
 *
 * kAttitudeVertical: x = [phi, theta, psi, p, q, r, w], outputs
 *   (phi, theta, psi, w). Altitude is not part of this state, so the fourth
 *   output is the body vertical velocity.
 * kWithAltitude: the same seven states plus h = -zE, outputs
 *   (phi, theta, psi, h). This is the plant the controller actually closes.
 */
enum class LinearStateSet { kAttitudeVertical, kWithAltitude };

struct LinearModel {
  Eigen::MatrixXd A;
  Eigen::MatrixXd B;
  Eigen::MatrixXd C;
  QuadState equilibrium;
  ControlInput equilibrium_input;

  Eigen::Index states() const { return A.rows(); }
  Eigen::Index inputs() const { return B.cols(); }
  Eigen::Index outputs() const { return C.rows(); }
  /// Throws std::invalid_argument on inconsistent dimensions.
  void validate() const;
};

/// Jacobians (A, B) of the reduced nonlinear model at an arbitrary point, by
/// central differences. No equilibrium check; used for spectra along
/// trajectories.
LinearModel jacobian(const QuadState& point, const ControlInput& input, const QuadParams& params,
                     LinearStateSet set = LinearStateSet::kAttitudeVertical);

/// Linearization about an equilibrium. Throws NotEquilibriumError when the
/// reduced state derivative norm at (eq, eq_input) is >= 1e-6.
LinearModel linearize(const QuadState& eq, const ControlInput& eq_input, const QuadParams& params,
                      LinearStateSet set = LinearStateSet::kAttitudeVertical);

/// Hover point at the given altitude with u_T = m g.
QuadState hover_state(double altitude);
ControlInput hover_input(const QuadParams& params);

/// Appends one integral-of-tracking-error state per output:
/// [[A, 0], [-C, 0]], input block [B; 0], output [C, 0].
LinearModel augment_tracking(const LinearModel& model);

}  // namespace pidaquad

#endif  // PIDAQUAD_LINEARIZATION_HPP
