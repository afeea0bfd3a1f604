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

#include <benchmark/benchmark.h>

#include <random>

#include "pidaquad/genetic_filter.hpp"
#include "pidaquad/linearization.hpp"
#include "pidaquad/pida_control.hpp"
#include "pidaquad/quad_dynamics.hpp"
#include "pidaquad/sdsa.hpp"
#include "pidaquad/stability.hpp"

namespace {

using namespace pidaquad;

void BM_Rk4Step(benchmark::State& state) {
  const QuadParams P;
  QuadState x = hover_state(50);
  x.p = 0.1;
  x.q = -0.05;
  const ControlInput u{0.01, -0.02, 0.001, P.m * P.g};
  for (auto _ : state) {
    x = step_rk4(x, u, DisturbanceTriple{}, 1e-3, P);
    benchmark::DoNotOptimize(x);
  }
}
BENCHMARK(BM_Rk4Step);

void BM_PidaStep(benchmark::State& state) {
  PidaChannelState s;
  const PidaGains g{2.0, 0.5, 1.0, 0.1, 0.05};
  double e = 0.3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(pida_step(s, e, 1e-3, g, {-2.0, 2.0}));
    e = -e * 0.999;
  }
}
BENCHMARK(BM_PidaStep);

void BM_GfUpdate(benchmark::State& state) {
  gf::SystemModel m;
  m.propagate = [](const Eigen::VectorXd& x, const Eigen::VectorXd& w) {
    return Eigen::VectorXd(0.9 * x + w);
  };
  m.measure = [](const Eigen::VectorXd& x) { return x; };
  m.process_noise_std = Eigen::VectorXd::Constant(1, 0.1);
  m.measurement_noise_std = Eigen::VectorXd::Constant(1, 0.1);
  gf::GfConfig c;
  c.population_size = static_cast<int>(state.range(0));
  c.init_spread = Eigen::VectorXd::Constant(1, 0.1);
  c.mutation_scale = Eigen::VectorXd::Constant(1, 0.02);
  std::mt19937_64 rng(1);
  const Eigen::VectorXd prior = Eigen::VectorXd::Zero(1);
  const Eigen::VectorXd z = Eigen::VectorXd::Constant(1, 0.2);
  for (auto _ : state) benchmark::DoNotOptimize(gf::gf_update(prior, z, m, c, rng));
}
BENCHMARK(BM_GfUpdate)->Arg(16)->Arg(100);

void BM_SdsaSphere(benchmark::State& state) {
  sdsa::SdsaConfig c;
  c.bounds.lower = Eigen::VectorXd::Constant(5, -10.0);
  c.bounds.upper = Eigen::VectorXd::Constant(5, 10.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        sdsa::optimize([](const Eigen::VectorXd& x) { return x.squaredNorm(); }, c));
  }
}
BENCHMARK(BM_SdsaSphere)->Unit(benchmark::kMillisecond);

void BM_LyapunovClosedLoop(benchmark::State& state) {
  const QuadParams P;
  const LinearModel aug = augment_tracking(
      linearize(hover_state(50), hover_input(P), P, LinearStateSet::kWithAltitude));
  const Eigen::MatrixXd A = stability::closed_loop_matrix(aug, default_gains());
  const Eigen::MatrixXd Q = Eigen::MatrixXd::Identity(A.rows(), A.cols());
  for (auto _ : state) benchmark::DoNotOptimize(stability::solve_lyapunov(A, Q));
}
BENCHMARK(BM_LyapunovClosedLoop)->Unit(benchmark::kMicrosecond);

}  // namespace
BENCHMARK_MAIN();
