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

#ifndef PIDAQUAD_GENETIC_FILTER_HPP
#define PIDAQUAD_GENETIC_FILTER_HPP

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <random>
#include <utility>
#include <vector>

namespace pidaquad::gf {

/// When process noise is applied to the population during one update.
enum class NoiseInjection { kPerGeneration, kPerMeasurement };

struct GfConfig {
  int population_size = 100;
  int max_generations = 10;
  double mutation_rate = 0.1;
  Eigen::VectorXd mutation_scale;  // per-state std dev
  Eigen::VectorXd init_spread;     // per-state std dev around the prior
  int elite_count = 1;
  std::uint64_t seed = 1;
  NoiseInjection noise_injection = NoiseInjection::kPerGeneration;

  /// Throws std::invalid_argument; `state_dim` checks the vector sizes.
  void validate(Eigen::Index state_dim) const;
};

struct Individual {
  Eigen::VectorXd state;
  double cost = 0.0;
};

using Population = std::vector<Individual>;

/**
 * Discrete system x_k = f(x_{k-1}, w_{k-1}), z_k = h(x_k) + v_k.
 * `propagate` receives a process-noise sample of the same size as the state;
 * `measure` is noise-free.
 */
struct SystemModel {
  std::function<Eigen::VectorXd(const Eigen::VectorXd&, const Eigen::VectorXd&)> propagate;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> measure;
  Eigen::VectorXd process_noise_std;
  Eigen::VectorXd measurement_noise_std;
};

struct GfResult {
  Eigen::VectorXd estimate;
  bool degenerate = false;
  /// Minimum cost of each evaluated generation.
  std::vector<double> min_cost_history;
  /// Population after the last generation (the estimate is its mean).
  Population final_population;
};

/// Noise-weighted squared measurement mismatch.
double measurement_cost(const Eigen::VectorXd& predicted, const Eigen::VectorXd& measurement,
                        const Eigen::VectorXd& measurement_noise_std);

/// Tournament-2 parent selection. Returns `count` index pairs.
std::vector<std::pair<std::size_t, std::size_t>> select(const Population& population,
                                                        std::size_t count,
                                                        std::mt19937_64& rng);

/// Indices of the `count` lowest-cost individuals, best first.
std::vector<std::size_t> elite_indices(const Population& population, std::size_t count);

/// lambda * a + (1 - lambda) * b with lambda ~ U(0, 1).
Eigen::VectorXd crossover(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                          std::mt19937_64& rng);

/// Adds N(0, scale_i) to component i with probability `rate`.
Eigen::VectorXd mutate(const Eigen::VectorXd& state, double rate,
                       const Eigen::VectorXd& scale, std::mt19937_64& rng);

/// One measurement update: evolve a population seeded around the propagated
/// prior against `measurement` and return the final-generation mean.
GfResult gf_update(const Eigen::VectorXd& prior, const Eigen::VectorXd& measurement,
                   const SystemModel& model, const GfConfig& config, std::mt19937_64& rng);

/// Stateful wrapper that feeds each estimate back as the next prior.
class GeneticFilter {
 public:
  GeneticFilter(SystemModel model, GfConfig config, Eigen::VectorXd initial_estimate);

  const Eigen::VectorXd& update(const Eigen::VectorXd& measurement);
  const Eigen::VectorXd& estimate() const { return estimate_; }
  SystemModel& model() { return model_; }
  const GfResult& last_result() const { return last_; }

 private:
  SystemModel model_;
  GfConfig config_;
  std::mt19937_64 rng_;
  Eigen::VectorXd estimate_;
  GfResult last_;
};

}  // namespace pidaquad::gf

#endif  // PIDAQUAD_GENETIC_FILTER_HPP
