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

#include "pidaquad/genetic_filter.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace pidaquad::gf {

void GfConfig::validate(Eigen::Index state_dim) const {
  if (population_size < 2) throw std::invalid_argument("gf: population_size must be >= 2");
  if (max_generations < 1) throw std::invalid_argument("gf: max_generations must be >= 1");
  if (!(mutation_rate >= 0.0 && mutation_rate <= 1.0)) {
    throw std::invalid_argument("gf: mutation_rate must lie in [0, 1]");
  }
  if (elite_count < 0 || elite_count >= population_size) {
    throw std::invalid_argument("gf: elite_count must be in [0, population_size)");
  }
  if (mutation_scale.size() != state_dim || init_spread.size() != state_dim) {
    throw std::invalid_argument("gf: mutation_scale and init_spread must match the state size");
  }
  if ((mutation_scale.array() < 0.0).any() || (init_spread.array() < 0.0).any()) {
    throw std::invalid_argument("gf: spreads must be non-negative");
  }
}

double measurement_cost(const Eigen::VectorXd& predicted, const Eigen::VectorXd& measurement,
                        const Eigen::VectorXd& noise_std) {
  if (predicted.size() != measurement.size()) {
    throw std::invalid_argument("gf: measurement dimension mismatch");
  }
  double cost = 0.0;
  for (Eigen::Index i = 0; i < predicted.size(); ++i) {
    const double sigma = noise_std.size() > i && noise_std(i) > 0.0 ? noise_std(i) : 1.0;
    const double r = (predicted(i) - measurement(i)) / sigma;
    cost += r * r;
  }
  return cost;
}

std::vector<std::pair<std::size_t, std::size_t>> select(const Population& population,
                                                        std::size_t count,
                                                        std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, population.size() - 1);
  auto tournament = [&] {
    const std::size_t a = pick(rng);
    const std::size_t b = pick(rng);
    return population[b].cost < population[a].cost ? b : a;
  };
  std::vector<std::pair<std::size_t, std::size_t>> parents;
  parents.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t first = tournament();
    parents.emplace_back(first, tournament());
  }
  return parents;
}

std::vector<std::size_t> elite_indices(const Population& population, std::size_t count) {
  std::vector<std::size_t> order(population.size());
  std::iota(order.begin(), order.end(), 0);
  count = std::min(count, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(count), order.end(),
                    [&](std::size_t a, std::size_t b) {
                      return population[a].cost < population[b].cost ||
                             (population[a].cost == population[b].cost && a < b);
                    });
  order.resize(count);
  return order;
}

Eigen::VectorXd crossover(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                          std::mt19937_64& rng) {
  if (a.size() != b.size()) throw std::invalid_argument("gf: crossover dimension mismatch");
  const double lambda = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  return lambda * a + (1.0 - lambda) * b;
}

Eigen::VectorXd mutate(const Eigen::VectorXd& state, double rate, const Eigen::VectorXd& scale,
                       std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd out = state;
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    if (unit(rng) < rate) out(i) += scale(i) * normal(rng);
  }
  return out;
}

namespace {

Eigen::VectorXd gaussian(const Eigen::VectorXd& std_dev, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd z(std_dev.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = std_dev(i) * normal(rng);
  return z;
}

void evaluate(Population& population, const Eigen::VectorXd& measurement,
              const SystemModel& model) {
  for (Individual& ind : population) {
    ind.cost = measurement_cost(model.measure(ind.state), measurement, model.measurement_noise_std);
  }
}

double min_cost(const Population& population) {
  double best = population.front().cost;
  for (const Individual& ind : population) best = std::min(best, ind.cost);
  return best;
}

}  // namespace

GfResult gf_update(const Eigen::VectorXd& prior, const Eigen::VectorXd& measurement,
                   const SystemModel& model, const GfConfig& config, std::mt19937_64& rng) {
  const Eigen::Index dim = prior.size();
  config.validate(dim);
  const Eigen::VectorXd no_noise = Eigen::VectorXd::Zero(dim);
  const std::size_t n = static_cast<std::size_t>(config.population_size);
  const std::size_t elites = static_cast<std::size_t>(config.elite_count);

  // Spread is applied before propagation so the dynamics correlate the
  // unmeasured components with the measured ones.
  Population population(n);
  for (Individual& ind : population) {
    const Eigen::VectorXd start = prior + gaussian(config.init_spread, rng);
    ind.state = model.propagate(start, gaussian(model.process_noise_std, rng));
  }

  GfResult result;
  for (int gen = 0; gen < config.max_generations; ++gen) {
    if (gen > 0 && config.noise_injection == NoiseInjection::kPerGeneration) {
      for (std::size_t j = elites; j < n; ++j) {
        Eigen::VectorXd& x = population[j].state;
        x += model.propagate(x, gaussian(model.process_noise_std, rng)) -
             model.propagate(x, no_noise);
      }
    }
    evaluate(population, measurement, model);
    result.min_cost_history.push_back(min_cost(population));

    Population next;
    next.reserve(n);
    for (std::size_t idx : elite_indices(population, elites)) next.push_back(population[idx]);
    for (const auto& [a, b] : select(population, n - next.size(), rng)) {
      Individual child;
      child.state = mutate(crossover(population[a].state, population[b].state, rng),
                           config.mutation_rate, config.mutation_scale, rng);
      next.push_back(std::move(child));
    }
    population = std::move(next);
  }
  evaluate(population, measurement, model);
  result.min_cost_history.push_back(min_cost(population));

  Eigen::VectorXd mean = Eigen::VectorXd::Zero(dim);
  for (const Individual& ind : population) mean += ind.state;
  mean /= static_cast<double>(n);

  double spread = 0.0;
  for (const Individual& ind : population) spread = std::max(spread, (ind.state - mean).cwiseAbs().maxCoeff());
  result.degenerate = spread == 0.0;
  result.estimate = std::move(mean);
  result.final_population = std::move(population);
  return result;
}

GeneticFilter::GeneticFilter(SystemModel model, GfConfig config, Eigen::VectorXd initial_estimate)
    : model_(std::move(model)),
      config_(std::move(config)),
      rng_(config_.seed),
      estimate_(std::move(initial_estimate)) {
  config_.validate(estimate_.size());
}

const Eigen::VectorXd& GeneticFilter::update(const Eigen::VectorXd& measurement) {
  last_ = gf_update(estimate_, measurement, model_, config_, rng_);
  estimate_ = last_.estimate;
  return estimate_;
}

}  // namespace pidaquad::gf
