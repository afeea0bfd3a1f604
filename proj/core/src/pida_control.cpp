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

#include "pidaquad/pida_control.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pidaquad {

std::string_view channel_name(Channel c) {
  switch (c) {
    case Channel::kRoll: return "roll";
    case Channel::kPitch: return "pitch";
    case Channel::kYaw: return "yaw";
    case Channel::kAltitude: return "altitude";
  }
  return "unknown";
}

void PidaGains::validate() const {
  if (!(tf > 0.0) || !std::isfinite(tf)) {
    throw std::invalid_argument("PIDA filter time constant tf must be finite and positive");
  }
  if (!std::isfinite(kp) || !std::isfinite(ki) || !std::isfinite(kd) || !std::isfinite(ka)) {
    throw std::invalid_argument("PIDA gains must be finite");
  }
}

ChannelGains default_gains() {
  return {{
      {1.0, 0.1436, 6.5097, 0.5772, 0.0437},
      {1.0, 3.6869, 21.2743, 0.3429, 0.0331},
      {1.0, 0.0437, 29.9872, 23.5238, 0.0117},
      {1.0, 1.00, 11.4676, 7.5114, 0.3752},
  }};
}

double derivative_filter_step(double& y, double input, double dt, double tf) {
  y = (tf * y + dt * input) / (tf + dt);
  return y;
}

double pida_step(PidaChannelState& s, double error, double dt, const PidaGains& g,
                 const OutputLimits& limits) {
  if (!s.primed) {
    s.prev_error = error;
    s.prev_filtered_deriv = s.filtered_deriv;
    s.primed = true;
  }

  const double raw_deriv = (error - s.prev_error) / dt;
  derivative_filter_step(s.filtered_deriv, raw_deriv, dt, g.tf);
  const double raw_accel = (s.filtered_deriv - s.prev_filtered_deriv) / dt;
  derivative_filter_step(s.filtered_accel, raw_accel, dt, g.tf);

  const double candidate = s.integral + 0.5 * (error + s.prev_error) * dt;
  const double unclamped =
      g.kp * error + g.ki * candidate + g.kd * s.filtered_deriv + g.ka * s.filtered_accel;
  const double out = std::clamp(unclamped, limits.min, limits.max);
  if (out == unclamped) s.integral = candidate;

  s.prev_error = error;
  s.prev_filtered_deriv = s.filtered_deriv;
  return out;
}

StepMetrics step_metrics(std::span<const double> times, std::span<const double> response,
                         double target, double step_magnitude, double band, double step_time) {
  if (times.size() != response.size() || times.empty()) {
    throw std::invalid_argument("step_metrics: times and response must be non-empty and equal");
  }
  if (step_magnitude == 0.0) throw std::invalid_argument("step_metrics: zero step magnitude");

  const double scale = std::abs(step_magnitude);
  const double direction = step_magnitude > 0.0 ? 1.0 : -1.0;
  const double initial = target - step_magnitude;
  const double envelope = band * scale;

  std::size_t first = 0;
  while (first < times.size() && times[first] < step_time) ++first;
  if (first == times.size()) throw std::invalid_argument("step_metrics: no samples after step");

  StepMetrics m;
  double peak = -std::numeric_limits<double>::infinity();
  std::size_t last_outside = times.size();  // none
  double t10 = std::numeric_limits<double>::quiet_NaN();
  double t90 = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = first; i < times.size(); ++i) {
    const double progress = direction * (response[i] - initial);  // 0 at start, scale at target
    peak = std::max(peak, progress);
    if (std::isnan(t10) && progress >= 0.1 * scale) t10 = times[i];
    if (std::isnan(t90) && progress >= 0.9 * scale) t90 = times[i];
    if (std::abs(response[i] - target) > envelope) last_outside = i;
  }
  m.overshoot = std::max(0.0, (peak - scale) / scale) * 100.0;
  m.rise_time = t90 - t10;

  const double record_end = times.back();
  const double tail_start = record_end - 0.1 * (record_end - times[first]);
  if (last_outside == times.size()) {
    m.settling_time = 0.0;
  } else if (last_outside + 1 == times.size() || times[last_outside] >= tail_start) {
    m.settled = false;
    m.settling_time = record_end - step_time;
  } else {
    m.settling_time = times[last_outside + 1] - step_time;
  }

  double tail_sum = 0.0;
  std::size_t tail_count = 0;
  for (std::size_t i = first; i < times.size(); ++i) {
    if (times[i] >= tail_start) {
      tail_sum += response[i];
      ++tail_count;
    }
  }
  m.steady_state_error = std::abs(tail_sum / static_cast<double>(tail_count) - target);
  return m;
}

double tuning_objective(const StepMetrics& m, double desired_overshoot, double desired_settling) {
  if (!m.settled) return kUnsettledPenalty + m.steady_state_error;
  const double dos = m.overshoot - desired_overshoot;
  const double dts = desired_settling - m.settling_time;
  return dos * dos + dts * dts;
}

}  // namespace pidaquad
