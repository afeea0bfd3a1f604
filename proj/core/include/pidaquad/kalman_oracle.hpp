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

#ifndef PIDAQUAD_KALMAN_ORACLE_HPP
#define PIDAQUAD_KALMAN_ORACLE_HPP

#include <cstdint>
#include <vector>

namespace pidaquad {

/// Scalar Kalman filter for x+ = a x + w, z = x + v. Reference estimator for
/// judging the genetic filter on linear-Gaussian benchmarks.
class ScalarKalman {
 public:
  ScalarKalman(double a, double process_std, double measurement_std, double x0 = 0.0,
               double p0 = 1.0)
      : a_(a), q_(process_std * process_std), r_(measurement_std * measurement_std), x_(x0), p_(p0) {}

  double update(double z) {
    const double x_pred = a_ * x_;
    const double p_pred = a_ * a_ * p_ + q_;
    const double gain = p_pred / (p_pred + r_);
    x_ = x_pred + gain * (z - x_pred);
    p_ = (1.0 - gain) * p_pred;
    return x_;
  }

  double estimate() const { return x_; }
  double variance() const { return p_; }

 private:
  double a_, q_, r_, x_, p_;
};

/// One realization of the scalar linear-Gaussian benchmark.
struct LinearBenchmark {
  std::vector<double> truth;
  std::vector<double> measurements;
};

LinearBenchmark simulate_linear_benchmark(double a, double process_std, double measurement_std,
                                          int steps, std::uint64_t seed, double x0 = 0.0);

double rmse(const std::vector<double>& estimate, const std::vector<double>& truth);

}  // namespace pidaquad

#endif  // PIDAQUAD_KALMAN_ORACLE_HPP
