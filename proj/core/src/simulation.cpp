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

#include "pidaquad/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>
#include <stdexcept>

namespace pidaquad::sim {

namespace {

constexpr double kBlowUp = 1e6;
constexpr double kClimbRate = 0.3;  // m/s, spiral vertical speed

std::uint64_t stream_seed(std::uint64_t seed, std::uint32_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    stream};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

enum Stream : std::uint32_t { kSensorStream = 1, kDisturbanceStream = 2, kFilterStream = 10 };

double wrap_angle(double a) { return std::remainder(a, 2.0 * std::numbers::pi); }

// Feasible yaw torque around the roll/pitch/thrust allocation, so the yaw
// loop sees the true actuator limits and its anti-windup engages.
OutputLimits yaw_limits(double u_phi, double u_theta, double u_T, double ceiling,
                        const QuadParams& params) {
  // Unclamped inverse mix for zero yaw torque.
  const double odd = 0.5 * u_T;   // F1 + F3
  const double even = 0.5 * u_T;  // F2 + F4
  const double f1 = 0.5 * (odd - u_theta / params.l);
  const double f3 = 0.5 * (odd + u_theta / params.l);
  const double f2 = 0.5 * (even + u_phi / params.l);
  const double f4 = 0.5 * (even - u_phi / params.l);
  const double fmax = params.max_rotor_force();
  const double k = 4.0 * params.c;  // yaw torque per unit of rotor force shift
  double lo = -ceiling;
  double hi = ceiling;
  for (double f : {f2, f4}) {  // these rotors gain force with positive yaw torque
    lo = std::max(lo, -f * k);
    hi = std::min(hi, (fmax - f) * k);
  }
  for (double f : {f1, f3}) {
    lo = std::max(lo, -(fmax - f) * k);
    hi = std::min(hi, f * k);
  }
  if (lo > hi) lo = hi = 0.0;
  return {lo, hi};
}

struct ChannelFilter {
  std::unique_ptr<gf::GeneticFilter> filter;
  double accel = 0.0;  // model input for the next propagation
};

}  // namespace

WhiteNoise::WhiteNoise(double mean, double sigma, std::uint64_t seed)
    : mean_(mean), sigma_(sigma), rng_(seed) {
  if (!(sigma >= 0.0)) throw std::invalid_argument("white_noise: sigma must be >= 0");
}

double WhiteNoise::next() {
  const double z = normal_(rng_);
  return sigma_ == 0.0 ? mean_ : mean_ + sigma_ * z;
}

Eigen::Vector3d spiral_reference(double t, double omega) {
  return {2.0 * std::sin(3.0 * omega * t) + 2.0 * std::cos(omega * t),
          2.0 * std::sin(omega * t) + 2.0 * std::cos(3.0 * omega * t), kClimbRate * t};
}

Eigen::Vector3d spiral_velocity(double t, double omega) {
  return {6.0 * omega * std::cos(3.0 * omega * t) - 2.0 * omega * std::sin(omega * t),
          2.0 * omega * std::cos(omega * t) - 6.0 * omega * std::sin(3.0 * omega * t), kClimbRate};
}

Eigen::Vector3d spiral_acceleration(double t, double omega) {
  const double w2 = omega * omega;
  return {-18.0 * w2 * std::sin(3.0 * omega * t) - 2.0 * w2 * std::cos(omega * t),
          -2.0 * w2 * std::sin(omega * t) - 18.0 * w2 * std::cos(3.0 * omega * t), 0.0};
}

void Scenario::validate() const {
  auto fail = [](const std::string& msg) { throw std::invalid_argument("scenario: " + msg); };
  if (!(duration > 0.0)) fail("duration must be > 0");
  if (!(dt > 0.0)) fail("dt must be > 0");
  const double ratio = duration / dt;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 * std::max(1.0, ratio)) {
    fail("duration must be an integer number of dt steps");
  }
  params.validate();
  for (const PidaGains& g : gains) g.validate();
  for (double s : sensor_noise) {
    if (!(s >= 0.0)) fail("sensor_noise entries must be >= 0");
  }
  if (!(disturbance.sigma >= 0.0)) fail("disturbance sigma must be >= 0");
  if (!(limits.torque > 0.0)) fail("torque limit must be > 0");
  if (!(limits.thrust_max >= 0.0)) fail("thrust_max must be >= 0");
  if (!(attitude_envelope > 0.0)) fail("attitude_envelope must be > 0");
  if (!(guidance.max_tilt > 0.0)) fail("guidance max_tilt must be > 0");
  if (!initial_state.all_finite()) fail("initial state must be finite");
  if (estimator.enabled) {
    gf::GfConfig probe;
    probe.population_size = estimator.population_size;
    probe.max_generations = estimator.max_generations;
    probe.mutation_rate = estimator.mutation_rate;
    probe.elite_count = estimator.elite_count;
    probe.mutation_scale = estimator.attitude.mutation_scale;
    probe.init_spread = estimator.attitude.init_spread;
    probe.validate(2);
    probe.mutation_scale = estimator.altitude.mutation_scale;
    probe.init_spread = estimator.altitude.init_spread;
    probe.validate(2);
  }
}

std::size_t Scenario::steps() const {
  return static_cast<std::size_t>(std::llround(duration / dt));
}

double RunMetrics::max_abs_channel_error() const {
  double m = 0.0;
  for (const AxisError& e : channel_error) m = std::max(m, e.max_abs);
  return m;
}

ChannelValues outputs_of(const QuadState& s) { return {s.phi, s.theta, s.psi, s.altitude()}; }

RunResult run_scenario(const Scenario& scenario) {
  scenario.validate();
  const QuadParams& P = scenario.params;
  const double dt = scenario.dt;
  const std::size_t steps = scenario.steps();
  const double thrust_max =
      scenario.limits.thrust_max > 0.0 ? scenario.limits.thrust_max : 4.0 * P.max_rotor_force();
  const double torque = scenario.limits.torque;
  const CommandProfile& cmd = scenario.commands;

  std::array<WhiteNoise, kChannelCount> sensor = {
      WhiteNoise(0.0, scenario.sensor_noise[0], stream_seed(scenario.seed, kSensorStream)),
      WhiteNoise(0.0, scenario.sensor_noise[1], stream_seed(scenario.seed, kSensorStream + 100)),
      WhiteNoise(0.0, scenario.sensor_noise[2], stream_seed(scenario.seed, kSensorStream + 200)),
      WhiteNoise(0.0, scenario.sensor_noise[3], stream_seed(scenario.seed, kSensorStream + 300))};
  WhiteNoise disturbance(scenario.disturbance.mean, scenario.disturbance.sigma,
                         stream_seed(scenario.seed, kDisturbanceStream));

  std::array<PidaController, kChannelCount> pida;
  for (Channel c : kAllChannels) {
    pida[index_of(c)] = PidaController(scenario.gains[index_of(c)], {-torque, torque});
  }
  pida[index_of(Channel::kAltitude)].set_limits({-P.hover_thrust(), thrust_max - P.hover_thrust()});

  QuadState state = scenario.initial_state;
  ChannelValues estimate{};

  auto read_sensors = [&](const QuadState& s) {
    ChannelValues y = outputs_of(s);
    for (std::size_t i = 0; i < kChannelCount; ++i) y[i] += sensor[i].next();
    return y;
  };

  // One (value, rate) filter per filtered channel.
  std::array<ChannelFilter, kChannelCount> filters;
  const EstimatorSettings& est = scenario.estimator;
  ChannelValues measured = read_sensors(state);
  if (est.enabled) {
    for (Channel c : kAllChannels) {
      const std::size_t i = index_of(c);
      const bool altitude = c == Channel::kAltitude;
      if (!altitude && !est.filter_attitude) continue;
      const ChannelFilterSettings& cfs = altitude ? est.altitude : est.attitude;
      gf::GfConfig config;
      config.population_size = est.population_size;
      config.max_generations = est.max_generations;
      config.mutation_rate = est.mutation_rate;
      config.elite_count = est.elite_count;
      config.noise_injection = est.noise_injection;
      config.mutation_scale = cfs.mutation_scale;
      config.init_spread = cfs.init_spread;
      config.seed = stream_seed(scenario.seed, kFilterStream + static_cast<std::uint32_t>(i));

      double* accel = &filters[i].accel;
      gf::SystemModel model;
      model.propagate = [accel, dt](const Eigen::VectorXd& x, const Eigen::VectorXd& w) {
        Eigen::VectorXd next(2);
        next(0) = x(0) + dt * x(1) + 0.5 * dt * dt * *accel + w(0);
        next(1) = x(1) + dt * *accel + w(1);
        return next;
      };
      model.measure = [](const Eigen::VectorXd& x) { return Eigen::VectorXd::Constant(1, x(0)); };
      model.process_noise_std = cfs.process_noise;
      model.measurement_noise_std =
          Eigen::VectorXd::Constant(1, std::max(scenario.sensor_noise[i], 1e-9));
      Eigen::VectorXd initial(2);
      initial << measured[i], 0.0;
      filters[i].filter =
          std::make_unique<gf::GeneticFilter>(std::move(model), std::move(config), initial);
    }
  }

  RunResult result;
  TimeSeries& series = result.series;
  series.dt = dt;
  series.records.reserve(steps + 1);
  RunMetrics& metrics = result.metrics;

  ControlInput applied{0.0, 0.0, 0.0, P.hover_thrust()};
  for (std::size_t k = 0; k <= steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    StepRecord rec;
    rec.t = t;
    rec.state = state;
    if (k > 0) measured = read_sensors(state);
    rec.measured = measured;

    // Estimation.
    for (std::size_t i = 0; i < kChannelCount; ++i) {
      if (filters[i].filter && k > 0) {
        estimate[i] = filters[i].filter->update(Eigen::VectorXd::Constant(1, measured[i]))(0);
      } else if (filters[i].filter) {
        estimate[i] = filters[i].filter->estimate()(0);
      } else {
        estimate[i] = measured[i];
      }
    }
    rec.estimated = estimate;

    // References.
    ChannelValues command = cmd.initial;
    if (cmd.kind == CommandKind::kStep && t >= cmd.step_time) command = cmd.final;
    if (cmd.kind == CommandKind::kSpiral) {
      const Eigen::Vector3d ref = spiral_reference(t, cmd.omega);
      const Eigen::Vector3d ref_v = spiral_velocity(t, cmd.omega);
      const Eigen::Vector3d ref_a = spiral_acceleration(t, cmd.omega);
      rec.position_reference = Eigen::Vector3d(ref.x(), ref.y(), cmd.altitude_offset + ref.z());
      const Eigen::Vector3d vel =
          body_to_inertial(state.angles()) * Eigen::Vector3d(state.u, state.v, state.w);
      const double ex = state.xE - ref.x();
      const double ey = state.yE - ref.y();
      const double evx = vel.x() - ref_v.x();
      const double evy = vel.y() - ref_v.y();
      const GuidanceGains& gg = scenario.guidance;
      const double ff = gg.feedforward ? 1.0 : 0.0;
      // Desired inertial acceleration, expressed in angle units (a / g).
      const double ax = ff * ref_a.x() / P.g - gg.k_pos * ex - gg.k_vel * evx;
      const double ay = ff * ref_a.y() / P.g - gg.k_pos * ey - gg.k_vel * evy;
      const double cpsi = std::cos(state.psi);
      const double spsi = std::sin(state.psi);
      const double ah = cpsi * ax + spsi * ay;   // heading frame, forward
      const double al = -spsi * ax + cpsi * ay;  // heading frame, right
      command[index_of(Channel::kPitch)] = std::clamp(-ah, -gg.max_tilt, gg.max_tilt);
      command[index_of(Channel::kRoll)] = std::clamp(al, -gg.max_tilt, gg.max_tilt);
      command[index_of(Channel::kAltitude)] = cmd.altitude_offset + ref.z();
    }
    rec.command = command;

    // Control.
    ControlInput u{0.0, 0.0, 0.0, P.hover_thrust()};
    if (scenario.controller_enabled) {
      const double e_roll = command[0] - estimate[0];
      const double e_pitch = command[1] - estimate[1];
      const double e_yaw = wrap_angle(command[2] - estimate[2]);
      const double e_alt = command[3] - estimate[3];
      u.u_phi = pida[0].update(e_roll, dt);
      u.u_theta = pida[1].update(e_pitch, dt);
      const double tilt = std::cos(estimate[0]) * std::cos(estimate[1]);
      const double u_alt = pida[3].update(e_alt, dt);
      u.u_T = std::clamp((P.hover_thrust() + u_alt) / std::max(tilt, 0.1), 0.0, thrust_max);
      pida[2].set_limits(yaw_limits(u.u_phi, u.u_theta, u.u_T, torque, P));
      u.u_psi = pida[2].update(e_yaw, dt);
    }
    const Allocation alloc = mix_controls_to_forces(u, P);
    applied = mix_forces_to_controls(alloc.forces, P);
    rec.forces = alloc.forces;
    rec.control = applied;
    series.records.push_back(rec);
    if (k == steps) break;

    // Filter model inputs for the next update.
    if (est.enabled) {
      const std::array<double, 3> torques = {applied.u_phi, applied.u_theta, applied.u_psi};
      const std::array<double, 3> inertia = {P.Ixx, P.Iyy, P.Izz};
      for (std::size_t i = 0; i < 3; ++i) filters[i].accel = torques[i] / inertia[i];
      filters[3].accel =
          applied.u_T * std::cos(estimate[0]) * std::cos(estimate[1]) / P.m - P.g;
    }

    // Plant.
    double noise = 0.0;
    if (scenario.disturbance.enabled && t >= scenario.disturbance.start_time) {
      noise = disturbance.next();
    }
    DisturbanceTriple extra;
    ControlInput plant_input = applied;
    switch (scenario.disturbance.channel) {
      case Channel::kRoll: extra.d_phi = noise; break;
      case Channel::kPitch: extra.d_theta = noise; break;
      case Channel::kYaw: extra.d_psi = noise; break;
      case Channel::kAltitude: plant_input.u_T += noise; break;
    }
    const double omega_r = residual_rotor_speed(alloc.forces, P);
    const ControlProvider controls = [&](double, const QuadState&) { return plant_input; };
    const DisturbanceProvider dist = [&](double, const QuadState& s) {
      DisturbanceTriple d = gyro_disturbance(s.p, s.q, omega_r, P);
      d.d_phi += extra.d_phi;
      d.d_theta += extra.d_theta;
      d.d_psi += extra.d_psi;
      return d;
    };
    try {
      state = step_rk4(state, controls, dist, t, dt, P);
    } catch (const SingularityError& e) {
      metrics.diverged = true;
      metrics.divergence_reason = std::string("singularity: ") + e.what();
      break;
    }
    const Vector12d x = state.to_vector();
    if (!x.allFinite() || x.cwiseAbs().maxCoeff() > kBlowUp) {
      metrics.diverged = true;
      metrics.divergence_reason = "state magnitude exceeded 1e6";
      break;
    }
    if (std::abs(state.phi) > scenario.attitude_envelope ||
        std::abs(state.theta) > scenario.attitude_envelope) {
      metrics.diverged = true;
      std::ostringstream os;
      os << "attitude left the envelope at t=" << t + dt;
      metrics.divergence_reason = os.str();
      break;
    }
  }

  const bool diverged = metrics.diverged;
  const std::string reason = metrics.divergence_reason;
  metrics = tracking_error(series);
  metrics.diverged = diverged;
  metrics.divergence_reason = reason;
  if (cmd.kind == CommandKind::kStep && !diverged) metrics.step = step_response(series, cmd);
  return result;
}

namespace {

AxisError summarize(const std::vector<double>& err) {
  AxisError out;
  if (err.empty()) return out;
  double sq = 0.0;
  for (double e : err) {
    sq += e * e;
    out.max_abs = std::max(out.max_abs, std::abs(e));
  }
  out.rms = std::sqrt(sq / static_cast<double>(err.size()));
  const std::size_t window = std::max<std::size_t>(1, err.size() / 10);
  double tail = 0.0;
  for (std::size_t i = err.size() - window; i < err.size(); ++i) tail += std::abs(err[i]);
  out.final_mean = tail / static_cast<double>(window);
  return out;
}

}  // namespace

RunMetrics tracking_error(const TimeSeries& series) {
  if (series.records.empty()) throw std::invalid_argument("tracking_error: empty series");
  RunMetrics m;
  for (std::size_t c = 0; c < kChannelCount; ++c) {
    std::vector<double> err;
    err.reserve(series.records.size());
    for (const StepRecord& r : series.records) {
      const double y = outputs_of(r.state)[c];
      double e = r.command[c] - y;
      if (c == index_of(Channel::kYaw)) e = wrap_angle(e);
      err.push_back(e);
    }
    m.channel_error[c] = summarize(err);
  }
  if (series.records.front().position_reference) {
    std::vector<double> dist;
    dist.reserve(series.records.size());
    for (const StepRecord& r : series.records) {
      const Eigen::Vector3d pos(r.state.xE, r.state.yE, r.state.altitude());
      dist.push_back((pos - *r.position_reference).norm());
    }
    m.position_error = summarize(dist);
  }
  return m;
}

std::array<std::optional<StepMetrics>, kChannelCount> step_response(
    const TimeSeries& series, const CommandProfile& profile, double band) {
  std::array<std::optional<StepMetrics>, kChannelCount> out;
  std::vector<double> times;
  times.reserve(series.records.size());
  for (const StepRecord& r : series.records) times.push_back(r.t);
  for (std::size_t c = 0; c < kChannelCount; ++c) {
    const double magnitude = profile.final[c] - profile.initial[c];
    if (magnitude == 0.0) continue;
    std::vector<double> y;
    y.reserve(series.records.size());
    for (const StepRecord& r : series.records) y.push_back(outputs_of(r.state)[c]);
    out[c] = step_metrics(times, y, profile.final[c], magnitude, band, profile.step_time);
  }
  return out;
}

double max_position_error_after(const TimeSeries& series, double t0) {
  double m = 0.0;
  for (const StepRecord& r : series.records) {
    if (r.t < t0 || !r.position_reference) continue;
    const Eigen::Vector3d pos(r.state.xE, r.state.yE, r.state.altitude());
    m = std::max(m, (pos - *r.position_reference).norm());
  }
  return m;
}

double rms_position_error(const TimeSeries& series, double t0) {
  double sq = 0.0;
  std::size_t n = 0;
  for (const StepRecord& r : series.records) {
    if (r.t < t0 || !r.position_reference) continue;
    const Eigen::Vector3d pos(r.state.xE, r.state.yE, r.state.altitude());
    sq += (pos - *r.position_reference).squaredNorm();
    ++n;
  }
  return n == 0 ? 0.0 : std::sqrt(sq / static_cast<double>(n));
}

double max_tilt_excursion(const TimeSeries& series) {
  double m = 0.0;
  for (const StepRecord& r : series.records) {
    m = std::max({m, std::abs(r.state.phi), std::abs(r.state.theta)});
  }
  return m;
}

}  // namespace pidaquad::sim
