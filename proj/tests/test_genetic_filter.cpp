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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "pidaquad/genetic_filter.hpp"
#include "pidaquad/kalman_oracle.hpp"

namespace pidaquad::gf {
namespace {

SystemModel identity_model(Eigen::Index dim) {
  SystemModel m;
  m.propagate = [](const Eigen::VectorXd& x, const Eigen::VectorXd& w) {
    return Eigen::VectorXd(x + w);
  };
  m.measure = [](const Eigen::VectorXd& x) { return x; };
  m.process_noise_std = Eigen::VectorXd::Zero(dim);
  m.measurement_noise_std = Eigen::VectorXd::Constant(dim, 1.0);
  return m;
}

GfConfig make_config(Eigen::Index dim, double spread, double mutation, std::uint64_t seed = 1) {
  GfConfig c;
  c.init_spread = Eigen::VectorXd::Constant(dim, spread);
  c.mutation_scale = Eigen::VectorXd::Constant(dim, mutation);
  c.seed = seed;
  return c;
}

SystemModel scalar_linear_model(double a, double q, double r) {
  SystemModel m;
  m.propagate = [a](const Eigen::VectorXd& x, const Eigen::VectorXd& w) {
    return Eigen::VectorXd(a * x + w);
  };
  m.measure = [](const Eigen::VectorXd& x) { return x; };
  m.process_noise_std = Eigen::VectorXd::Constant(1, q);
  m.measurement_noise_std = Eigen::VectorXd::Constant(1, r);
  return m;
}

TEST(GfConfigTest, Defaults) {
  const GfConfig c;
  EXPECT_EQ(c.population_size, 100);
  EXPECT_EQ(c.max_generations, 10);
  EXPECT_EQ(c.mutation_rate, 0.1);
  EXPECT_EQ(c.elite_count, 1);
}

TEST(GfConfigTest, ValidateRejectsBadValues) {
  GfConfig c = make_config(2, 0.1, 0.01);
  EXPECT_NO_THROW(c.validate(2));
  EXPECT_THROW(c.validate(3), std::invalid_argument);
  GfConfig bad = c;
  bad.population_size = 1;
  EXPECT_THROW(bad.validate(2), std::invalid_argument);
  bad = c;
  bad.mutation_rate = 1.5;
  EXPECT_THROW(bad.validate(2), std::invalid_argument);
  bad = c;
  bad.elite_count = bad.population_size;
  EXPECT_THROW(bad.validate(2), std::invalid_argument);
}

TEST(MeasurementCostTest, NoiseWeightedSquaredError) {
  Eigen::Vector2d pred(1.0, 2.0), z(2.0, 0.0), sigma(0.5, 2.0);
  EXPECT_DOUBLE_EQ(measurement_cost(pred, z, sigma), 4.0 + 1.0);
  EXPECT_EQ(measurement_cost(z, z, sigma), 0.0);
}

TEST(GfUpdateTest, IdentitySystemConvergesToTruth) {
  const Eigen::Vector3d truth(0.4, -0.2, 1.0);
  std::mt19937_64 rng(10);
  const GfResult r = gf_update(truth + Eigen::Vector3d(0.05, -0.05, 0.03), truth,
                               identity_model(3), make_config(3, 0.1, 0.02), rng);
  EXPECT_LT((r.estimate - truth).cwiseAbs().maxCoeff(), 0.02);
  EXPECT_FALSE(r.degenerate);
}

TEST(GfUpdateTest, DegeneratePopulationReturnsThePoint) {
  GfConfig c = make_config(2, 0.0, 0.0);
  c.population_size = 2;
  c.elite_count = 1;
  c.mutation_rate = 0.0;
  std::mt19937_64 rng(1);
  const Eigen::Vector2d x(3.0, -4.0);
  const GfResult r = gf_update(x, Eigen::Vector2d(0.0, 0.0), identity_model(2), c, rng);
  EXPECT_EQ(r.estimate, Eigen::VectorXd(x));
  EXPECT_TRUE(r.degenerate);
}

TEST(GfUpdateTest, EstimateIsMeanOfFinalGeneration) {
  std::mt19937_64 rng(2);
  const GfResult r = gf_update(Eigen::Vector2d(0, 0), Eigen::Vector2d(0.3, 0.1), identity_model(2),
                               make_config(2, 0.5, 0.1), rng);
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(2);
  for (const Individual& ind : r.final_population) mean += ind.state;
  mean /= static_cast<double>(r.final_population.size());
  EXPECT_LT((mean - r.estimate).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_EQ(r.final_population.size(), 100u);
}

TEST(GfUpdateTest, MinCostNonIncreasingWithElitism) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    std::mt19937_64 rng(seed);
    SystemModel m = identity_model(2);
    m.process_noise_std = Eigen::Vector2d(0.05, 0.05);
    GfConfig c = make_config(2, 1.0, 0.3);
    c.noise_injection = NoiseInjection::kPerGeneration;
    const GfResult r = gf_update(Eigen::Vector2d(0, 0), Eigen::Vector2d(1, -1), m, c, rng);
    ASSERT_EQ(r.min_cost_history.size(), 11u);
    for (std::size_t i = 1; i < r.min_cost_history.size(); ++i) {
      EXPECT_LE(r.min_cost_history[i], r.min_cost_history[i - 1]);
    }
  }
}

TEST(GfUpdateTest, ErrorShrinksAcrossGenerations) {
  std::vector<double> err1, err10;
  const Eigen::Vector2d truth(0.7, -0.3);
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    GfConfig c = make_config(2, 0.5, 0.05);
    c.max_generations = 1;
    std::mt19937_64 r1(seed);
    err1.push_back((gf_update(Eigen::Vector2d::Zero(), truth, identity_model(2), c, r1).estimate -
                    truth).norm());
    c.max_generations = 10;
    std::mt19937_64 r10(seed);
    err10.push_back((gf_update(Eigen::Vector2d::Zero(), truth, identity_model(2), c, r10).estimate -
                     truth).norm());
  }
  std::sort(err1.begin(), err1.end());
  std::sort(err10.begin(), err10.end());
  EXPECT_LT(err10[25], err1[25]);
}

TEST(GfUpdateTest, DeterministicSequence) {
  auto run = [] {
    GeneticFilter f(scalar_linear_model(0.9, 0.1, 0.1), make_config(1, 0.1, 0.02, 33),
                    Eigen::VectorXd::Zero(1));
    std::vector<double> out;
    for (int k = 0; k < 30; ++k) out.push_back(f.update(Eigen::VectorXd::Constant(1, 0.1 * k))(0));
    return out;
  };
  EXPECT_EQ(run(), run());
}

TEST(GfUpdateTest, PerMeasurementNoiseInjectionAlsoTracks) {
  GfConfig c = make_config(1, 0.1, 0.02, 4);
  c.noise_injection = NoiseInjection::kPerMeasurement;
  const LinearBenchmark b = simulate_linear_benchmark(0.9, 0.1, 0.1, 200, 4);
  GeneticFilter f(scalar_linear_model(0.9, 0.1, 0.1), c, Eigen::VectorXd::Zero(1));
  std::vector<double> est;
  for (double z : b.measurements) est.push_back(f.update(Eigen::VectorXd::Constant(1, z))(0));
  EXPECT_LT(rmse(est, b.truth), rmse(b.measurements, b.truth) * 1.5);
}

TEST(GfLinearBenchmarkTest, WithinTwiceKalmanRmse) {
  std::vector<double> ratios;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const LinearBenchmark b = simulate_linear_benchmark(0.9, 0.1, 0.1, 200, seed);
    GeneticFilter f(scalar_linear_model(0.9, 0.1, 0.1), make_config(1, 0.1, 0.02, seed),
                    Eigen::VectorXd::Zero(1));
    ScalarKalman k(0.9, 0.1, 0.1);
    std::vector<double> gf_est, kf_est;
    for (double z : b.measurements) {
      gf_est.push_back(f.update(Eigen::VectorXd::Constant(1, z))(0));
      kf_est.push_back(k.update(z));
    }
    ratios.push_back(rmse(gf_est, b.truth) / rmse(kf_est, b.truth));
  }
  std::sort(ratios.begin(), ratios.end());
  EXPECT_LE(ratios[2], 2.0);
}

TEST(GfLinearBenchmarkTest, NoiseFreeMeasurementsTrackClosely) {
  const LinearBenchmark b = simulate_linear_benchmark(1.0, 0.1, 0.0, 200, 3);
  GeneticFilter f(scalar_linear_model(1.0, 0.1, 0.0), make_config(1, 0.1, 0.02, 3),
                  Eigen::VectorXd::Zero(1));
  std::vector<double> est;
  for (double z : b.measurements) est.push_back(f.update(Eigen::VectorXd::Constant(1, z))(0));
  EXPECT_LT(rmse(est, b.truth), 0.05);
}

TEST(SelectTest, TournamentFavoursLowCost) {
  Population pop(2);
  pop[0].cost = 0.0;
  pop[1].cost = 1e9;
  std::mt19937_64 rng(5);
  const auto pairs = select(pop, 20000, rng);
  std::size_t wins = 0;
  for (const auto& [a, b] : pairs) wins += (a == 0) + (b == 0);
  const double p = static_cast<double>(wins) / (2.0 * pairs.size());
  EXPECT_GE(p, 0.75 - 0.01);
}

TEST(SelectTest, EqualCostsSelectUniformly) {
  Population pop(4);
  std::mt19937_64 rng(6);
  const auto pairs = select(pop, 40000, rng);
  std::array<int, 4> counts{};
  for (const auto& [a, b] : pairs) {
    ++counts[a];
    ++counts[b];
  }
  for (int c : counts) EXPECT_NEAR(c / 80000.0, 0.25, 0.01);
}

TEST(SelectTest, EliteSurvivesUnchanged) {
  GfConfig c = make_config(1, 1.0, 0.5);
  c.max_generations = 1;
  c.mutation_rate = 1.0;
  std::mt19937_64 rng(9);
  const GfResult r =
      gf_update(Eigen::VectorXd::Zero(1), Eigen::VectorXd::Constant(1, 0.2), identity_model(1), c, rng);
  // The elite occupies slot 0 and reproduces the first-generation minimum cost.
  EXPECT_EQ(r.final_population.front().cost, r.min_cost_history.front());
}

TEST(EliteIndicesTest, BestFirst) {
  Population pop(4);
  pop[0].cost = 3;
  pop[1].cost = 1;
  pop[2].cost = 2;
  pop[3].cost = 1;
  const auto idx = elite_indices(pop, 3);
  ASSERT_EQ(idx.size(), 3u);
  EXPECT_EQ(idx[0], 1u);
  EXPECT_EQ(idx[1], 3u);
  EXPECT_EQ(idx[2], 2u);
}

TEST(CrossoverTest, IdenticalParents) {
  std::mt19937_64 rng(1);
  const Eigen::Vector3d a(1, 2, 3);
  EXPECT_EQ(crossover(a, a, rng), Eigen::VectorXd(a));
}

TEST(CrossoverTest, ChildOnSegmentAndReproducible) {
  std::mt19937_64 r1(42), r2(42);
  const Eigen::Vector2d a(0, 0), b(2, 4);
  for (int i = 0; i < 100; ++i) {
    const Eigen::VectorXd c1 = crossover(a, b, r1);
    const Eigen::VectorXd c2 = crossover(a, b, r2);
    EXPECT_EQ(c1, c2);
    EXPECT_GE(c1(0), 0.0);
    EXPECT_LE(c1(0), 2.0);
    EXPECT_NEAR(c1(1), 2.0 * c1(0), 1e-12);
  }
}

TEST(MutateTest, ZeroRateOrScaleLeavesIndividual) {
  std::mt19937_64 rng(1);
  const Eigen::Vector3d x(1, -1, 0.5);
  EXPECT_EQ(mutate(x, 0.0, Eigen::Vector3d(1, 1, 1), rng), Eigen::VectorXd(x));
  EXPECT_EQ(mutate(x, 1.0, Eigen::Vector3d::Zero(), rng), Eigen::VectorXd(x));
}

TEST(MutateTest, FullRateMovesEveryComponent) {
  std::mt19937_64 rng(2);
  const Eigen::Vector3d x(0, 0, 0);
  const Eigen::VectorXd y = mutate(x, 1.0, Eigen::Vector3d(1, 1, 1), rng);
  EXPECT_TRUE((y.array() != 0.0).all());
}

TEST(KalmanOracleTest, SteadyStateGainMatchesRiccati) {
  // Scalar Riccati fixed point for a = 0.9, q = r = 0.01.
  const double a = 0.9, q = 0.01, r = 0.01;
  double p = 1.0;
  for (int i = 0; i < 1000; ++i) {
    const double pp = a * a * p + q;
    p = pp * r / (pp + r);
  }
  ScalarKalman k(a, 0.1, 0.1);
  for (int i = 0; i < 1000; ++i) k.update(0.0);
  EXPECT_NEAR(k.variance(), p, 1e-12);
}

}  // namespace
}  // namespace pidaquad::gf
