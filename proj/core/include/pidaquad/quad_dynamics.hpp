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

#ifndef PIDAQUAD_QUAD_DYNAMICS_HPP
#define PIDAQUAD_QUAD_DYNAMICS_HPP

#include <Eigen/Dense>

#include <functional>
#include <stdexcept>
#include <string>

namespace pidaquad {

using Vector12d = Eigen::Matrix<double, 12, 1>;

/// Thrown when |theta| gets within kSingularityMargin of pi/2, where the
/// Euler-rate kinematics are undefined.
class SingularityError : public std::domain_error {
 public:
  explicit SingularityError(const std::string& what) : std::domain_error(what) {}
};

inline constexpr double kSingularityMargin = 1e-6;

/**
 * Physical constants of the vehicle.
 *
 * Defaults are the published airframe values. `b` (rotor thrust coefficient,
 * F_i = b * Omega_i^2) is not part of that set; it only feeds the residual
 * rotor speed used by the gyroscopic disturbance.
 */
struct QuadParams {
  double m = 0.8;        // kg
  double l = 0.2;        // m
  double g = 9.81;       // m/s^2
  double c = 3.00e-5;    // force-to-torque coefficient
  double Ixx = 2.28e-2;  // kg m^2
  double Iyy = 3.10e-2;
  double Izz = 4.40e-2;
  double Im = 8.30e-5;   // rotor inertia
  double b = 3.0e-5;     // N s^2 / rad^2

  /// Throws std::invalid_argument naming the first non-positive field.
  void validate() const;

  double hover_thrust() const { return m * g; }
  /// Per-rotor actuator ceiling.
  double max_rotor_force() const { return 2.0 * m * g; }
};

struct EulerAngles {
  double phi = 0.0;
  double theta = 0.0;
  double psi = 0.0;
};

struct EulerRates {
  double phi_dot = 0.0;
  double theta_dot = 0.0;
  double psi_dot = 0.0;
};

struct BodyRates {
  double p = 0.0;
  double q = 0.0;
  double r = 0.0;
};

/// Angular acceleration disturbance on (roll, pitch, yaw), in N m.
struct DisturbanceTriple {
  double d_phi = 0.0;
  double d_theta = 0.0;
  double d_psi = 0.0;
};

struct ControlInput {
  double u_phi = 0.0;    // N m
  double u_theta = 0.0;  // N m
  double u_psi = 0.0;    // N m
  double u_T = 0.0;      // N, along -z_body
};

struct RotorForces {
  double F1 = 0.0;
  double F2 = 0.0;
  double F3 = 0.0;
  double F4 = 0.0;
};

/**
 * Full 12-state vehicle state. Body z points down (NED); altitude is -zE.
 * The same layout is used for time derivatives.
 */
struct QuadState {
  double phi = 0.0, theta = 0.0, psi = 0.0;
  double p = 0.0, q = 0.0, r = 0.0;
  double u = 0.0, v = 0.0, w = 0.0;
  double xE = 0.0, yE = 0.0, zE = 0.0;

  double altitude() const { return -zE; }
  EulerAngles angles() const { return {phi, theta, psi}; }
  BodyRates rates() const { return {p, q, r}; }

  Vector12d to_vector() const;
  static QuadState from_vector(const Vector12d& x);
  bool all_finite() const;
};

using QuadStateDerivative = QuadState;

struct Allocation {
  RotorForces forces;
  bool saturated = false;
};

// Kinematics.
BodyRates euler_rates_to_body_rates(const EulerAngles& angles, const EulerRates& rates);
EulerRates body_rates_to_euler_rates(const EulerAngles& angles, const BodyRates& omega);
/// Rotation taking body-frame vectors into the inertial (NED) frame, Z-Y-X order.
Eigen::Matrix3d body_to_inertial(const EulerAngles& angles);

// Rotor mixing.
ControlInput mix_forces_to_controls(const RotorForces& forces, const QuadParams& params);
/// Inverts the mixing matrix, then clamps each rotor to [0, max_rotor_force()].
Allocation mix_controls_to_forces(const ControlInput& controls, const QuadParams& params);

double residual_rotor_speed(const RotorForces& forces, const QuadParams& params);
DisturbanceTriple gyro_disturbance(double p, double q, double omega_r, const QuadParams& params);

QuadStateDerivative derivatives(const QuadState& state, const ControlInput& controls,
                                const DisturbanceTriple& disturbance, const QuadParams& params);

using ControlProvider = std::function<ControlInput(double t, const QuadState&)>;
using DisturbanceProvider = std::function<DisturbanceTriple(double t, const QuadState&)>;

/// One classical Runge-Kutta step of `derivatives`. Providers are sampled at
/// each stage time t, t + dt/2, t + dt.
QuadState step_rk4(const QuadState& state, const ControlProvider& controls,
                   const DisturbanceProvider& disturbance, double t, double dt,
                   const QuadParams& params);

/// Convenience overload with inputs held constant across the step.
QuadState step_rk4(const QuadState& state, const ControlInput& controls,
                   const DisturbanceTriple& disturbance, double dt, const QuadParams& params);

}  // namespace pidaquad

#endif  // PIDAQUAD_QUAD_DYNAMICS_HPP
