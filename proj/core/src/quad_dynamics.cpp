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

#include "pidaquad/quad_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace pidaquad {

namespace {

void check_singularity(double theta) {
  if (!(std::abs(theta) < std::numbers::pi / 2.0 - kSingularityMargin)) {
    std::ostringstream os;
    os << "pitch angle " << theta << " rad is at the Euler-angle singularity";
    throw SingularityError(os.str());
  }
}

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw std::invalid_argument(std::string("quad parameter '") + name +
                                "' must be finite and strictly positive");
  }
}

}  // namespace

void QuadParams::validate() const {
  require_positive(m, "m");
  require_positive(l, "l");
  require_positive(g, "g");
  require_positive(c, "c");
  require_positive(Ixx, "Ixx");
  require_positive(Iyy, "Iyy");
  require_positive(Izz, "Izz");
  require_positive(Im, "Im");
  require_positive(b, "b");
}

Vector12d QuadState::to_vector() const {
  Vector12d x;
  x << phi, theta, psi, p, q, r, u, v, w, xE, yE, zE;
  return x;
}

QuadState QuadState::from_vector(const Vector12d& x) {
  return {x(0), x(1), x(2), x(3), x(4), x(5), x(6), x(7), x(8), x(9), x(10), x(11)};
}

bool QuadState::all_finite() const { return to_vector().allFinite(); }

BodyRates euler_rates_to_body_rates(const EulerAngles& a, const EulerRates& rates) {
  check_singularity(a.theta);
  const double sphi = std::sin(a.phi), cphi = std::cos(a.phi);
  const double sth = std::sin(a.theta), cth = std::cos(a.theta);
  return {rates.phi_dot - sth * rates.psi_dot,
          cphi * rates.theta_dot + cth * sphi * rates.psi_dot,
          -sphi * rates.theta_dot + cth * cphi * rates.psi_dot};
}

EulerRates body_rates_to_euler_rates(const EulerAngles& a, const BodyRates& w) {
  check_singularity(a.theta);
  const double sphi = std::sin(a.phi), cphi = std::cos(a.phi);
  const double cth = std::cos(a.theta), tth = std::tan(a.theta);
  return {w.p + sphi * tth * w.q + cphi * tth * w.r,
          cphi * w.q - sphi * w.r,
          (sphi * w.q + cphi * w.r) / cth};
}

Eigen::Matrix3d body_to_inertial(const EulerAngles& a) {
  const double sphi = std::sin(a.phi), cphi = std::cos(a.phi);
  const double sth = std::sin(a.theta), cth = std::cos(a.theta);
  const double spsi = std::sin(a.psi), cpsi = std::cos(a.psi);
  Eigen::Matrix3d R;
  R << cth * cpsi, sphi * sth * cpsi - cphi * spsi, cphi * sth * cpsi + sphi * spsi,
      cth * spsi, sphi * sth * spsi + cphi * cpsi, cphi * sth * spsi - sphi * cpsi,
      -sth, sphi * cth, cphi * cth;
  return R;
}

ControlInput mix_forces_to_controls(const RotorForces& F, const QuadParams& params) {
  return {params.l * (F.F2 - F.F4),
          params.l * (F.F3 - F.F1),
          params.c * (F.F2 - F.F1 + F.F4 - F.F3),
          F.F1 + F.F2 + F.F3 + F.F4};
}

Allocation mix_controls_to_forces(const ControlInput& U, const QuadParams& params) {
  // Closed-form inverse of the mixing matrix.
  const double yaw_split = U.u_psi / params.c;
  const double even = 0.5 * (U.u_T + yaw_split);  // F2 + F4
  const double odd = 0.5 * (U.u_T - yaw_split);   // F1 + F3
  const double roll = U.u_phi / params.l;         // F2 - F4
  const double pitch = U.u_theta / params.l;      // F3 - F1
  RotorForces raw{0.5 * (odd - pitch), 0.5 * (even + roll), 0.5 * (odd + pitch),
                  0.5 * (even - roll)};

  const double fmax = params.max_rotor_force();
  Allocation out;
  auto clamp = [&](double f) {
    if (f < 0.0 || f > fmax) out.saturated = true;
    return std::clamp(f, 0.0, fmax);
  };
  out.forces = {clamp(raw.F1), clamp(raw.F2), clamp(raw.F3), clamp(raw.F4)};
  return out;
}

double residual_rotor_speed(const RotorForces& F, const QuadParams& params) {
  auto speed = [&](double f) { return std::sqrt(std::max(f, 0.0) / params.b); };
  return -speed(F.F1) + speed(F.F2) - speed(F.F3) + speed(F.F4);
}

DisturbanceTriple gyro_disturbance(double p, double q, double omega_r, const QuadParams& params) {
  return {q * params.Im * omega_r, -p * params.Im * omega_r, 0.0};
}

QuadStateDerivative derivatives(const QuadState& s, const ControlInput& U,
                                const DisturbanceTriple& d, const QuadParams& P) {
  const EulerAngles angles = s.angles();
  const EulerRates att = body_rates_to_euler_rates(angles, s.rates());

  const double sphi = std::sin(s.phi), cphi = std::cos(s.phi);
  const double sth = std::sin(s.theta), cth = std::cos(s.theta);

  QuadStateDerivative dx;
  dx.phi = att.phi_dot;
  dx.theta = att.theta_dot;
  dx.psi = att.psi_dot;

  dx.p = ((P.Iyy - P.Izz) * s.q * s.r + U.u_phi + d.d_phi) / P.Ixx;
  dx.q = ((P.Izz - P.Ixx) * s.p * s.r + U.u_theta + d.d_theta) / P.Iyy;
  dx.r = ((P.Ixx - P.Iyy) * s.p * s.q + U.u_psi + d.d_psi) / P.Izz;

  dx.u = s.r * s.v - s.q * s.w - P.g * sth;
  dx.v = s.p * s.w - s.r * s.u + P.g * sphi * cth;
  dx.w = s.q * s.u - s.p * s.v + P.g * cth * cphi - U.u_T / P.m;

  const Eigen::Vector3d vel = body_to_inertial(angles) * Eigen::Vector3d(s.u, s.v, s.w);
  dx.xE = vel.x();
  dx.yE = vel.y();
  dx.zE = vel.z();
  return dx;
}

QuadState step_rk4(const QuadState& state, const ControlProvider& controls,
                   const DisturbanceProvider& disturbance, double t, double dt,
                   const QuadParams& params) {
  if (!(dt > 0.0)) throw std::invalid_argument("step_rk4: dt must be positive");

  auto f = [&](double tau, const Vector12d& x) {
    const QuadState s = QuadState::from_vector(x);
    return derivatives(s, controls(tau, s), disturbance(tau, s), params).to_vector();
  };

  const Vector12d x0 = state.to_vector();
  const Vector12d k1 = f(t, x0);
  const Vector12d k2 = f(t + 0.5 * dt, x0 + 0.5 * dt * k1);
  const Vector12d k3 = f(t + 0.5 * dt, x0 + 0.5 * dt * k2);
  const Vector12d k4 = f(t + dt, x0 + dt * k3);
  return QuadState::from_vector(x0 + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
}

QuadState step_rk4(const QuadState& state, const ControlInput& controls,
                   const DisturbanceTriple& disturbance, double dt, const QuadParams& params) {
  return step_rk4(
      state, [&](double, const QuadState&) { return controls; },
      [&](double, const QuadState&) { return disturbance; }, 0.0, dt, params);
}

}  // namespace pidaquad
