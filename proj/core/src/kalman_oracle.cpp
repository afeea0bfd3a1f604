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

#include "pidaquad/kalman_oracle.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace pidaquad {

LinearBenchmark simulate_linear_benchmark(double a, double process_std, double measurement_std,
                                          int steps, std::uint64_t seed, double x0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  LinearBenchmark out;
  out.truth.reserve(steps);
  out.measurements.reserve(steps);
  double x = x0;
  for (int k = 0; k < steps; ++k) {
    x = a * x + process_std * normal(rng);
    out.truth.push_back(x);
    out.measurements.push_back(x + measurement_std * normal(rng));
  }
  return out;
}

double rmse(const std::vector<double>& estimate, const std::vector<double>& truth) {
  if (estimate.size() != truth.size() || truth.empty()) {
    throw std::invalid_argument("rmse: sequences must be non-empty and of equal length");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const double e = estimate[i] - truth[i];
    sum += e * e;
  }
  return std::sqrt(sum / static_cast<double>(truth.size()));
}

}  // namespace pidaquad
