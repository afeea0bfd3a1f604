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

#ifndef PIDAQUAD_PIDA_CONTROL_HPP
#define PIDAQUAD_PIDA_CONTROL_HPP

#include <array>
#include <cstddef>
#include <limits>
#include <span>
#include <string_view>

namespace pidaquad {

enum class Channel : std::size_t { kRoll = 0, kPitch = 1, kYaw = 2, kAltitude = 3 };
inline constexpr std::size_t kChannelCount = 4;
inline constexpr std::array<Channel, kChannelCount> kAllChannels = {
    Channel::kRoll, Channel::kPitch, Channel::kYaw, Channel::kAltitude};

constexpr std::size_t index_of(Channel c) { return static_cast<std::size_t>(c); }
std::string_view channel_name(Channel c);

struct PidaGains {
  double kp = 1.0;
  double ki = 0.0;
  double kd = 0.0;
  double ka = 0.0;
  double tf = 0.01;  // derivative filter time constant, s

  /// Throws std::invalid_argument unless tf > 0 and all gains are finite.
  void validate() const;
};

using ChannelGains = std::array<PidaGains, kChannelCount>;

/// Published per-channel gains (roll, pitch, yaw, altitude). kp is not part
/// of the published set and defaults to 1.
ChannelGains default_gains();

struct OutputLimits {
  double min = -std::numeric_limits<double>::infinity();
  double max = std::numeric_limits<double>::infinity();
};

struct PidaChannelState {
  double integral = 0.0;
  double filtered_deriv = 0.0;
  double filtered_accel = 0.0;
  double prev_error = 0.0;
  double prev_filtered_deriv = 0.0;
  bool primed = false;

  void reset() { *this = PidaChannelState{}; }
};

/// Backward-Euler step of T_f y' = u - y. Updates `y` and returns it.
double derivative_filter_step(double& y, double input, double dt, double tf);

/**
 * One PIDA update: u = kp e + ki int(e) + kd D + ka A, where D is the
 * filtered first difference of e and A the filtered first difference of D
 * (two cascaded s/(1 + T_f s) stages). The integral is trapezoidal and is
 * held while the output saturates. The first call after reset() only primes
 * the difference memory, so a nonzero initial error produces no derivative
 * kick.
 */
double pida_step(PidaChannelState& state, double error, double dt, const PidaGains& gains,
                 const OutputLimits& limits = {});

class PidaController {
 public:
  PidaController() = default;
  PidaController(PidaGains gains, OutputLimits limits) : gains_(gains), limits_(limits) {}

  double update(double error, double dt) { return pida_step(state_, error, dt, gains_, limits_); }
  void reset() { state_.reset(); }

  void set_limits(OutputLimits limits) { limits_ = limits; }
  const OutputLimits& limits() const { return limits_; }
  const PidaGains& gains() const { return gains_; }
  const PidaChannelState& state() const { return state_; }

 private:
  PidaGains gains_;
  OutputLimits limits_;
  PidaChannelState state_;
};

struct StepMetrics {
  double overshoot = 0.0;          // percent of |step|
  double settling_time = 0.0;      // s after the step, 2% band by default
  double rise_time = std::numeric_limits<double>::quiet_NaN();  // 10 -> 90 %, s
  double steady_state_error = 0.0; // |mean of final 10% - target|
  bool settled = true;
};

/**
 * Step-response metrics of a uniformly sampled record.
 *
 * `target` is the post-step reference, `step_magnitude` the signed size of
 * the step (target - initial). Times before `step_time` are ignored. The
 * response counts as not settled when it is outside the band anywhere in the
 * final 10% of the record; settling_time is then the record length after the
 * step.
 */
StepMetrics step_metrics(std::span<const double> times, std::span<const double> response,
                         double target, double step_magnitude, double band = 0.02,
                         double step_time = 0.0);

inline constexpr double kUnsettledPenalty = 1e6;

/// (overshoot - desired)^2 + (desired_settling - settling)^2, or the
/// unsettled penalty plus the final tracking error.
double tuning_objective(const StepMetrics& metrics, double desired_overshoot = 5.0,
                        double desired_settling = 2.0);

}  // namespace pidaquad

#endif  // PIDAQUAD_PIDA_CONTROL_HPP
