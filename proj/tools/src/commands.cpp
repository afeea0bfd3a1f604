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

#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>
#include <vector>

#include "pidaquad/genetic_filter.hpp"
#include "pidaquad/kalman_oracle.hpp"
#include "pidaquad/linearization.hpp"
#include "pidaquad/report.hpp"
#include "pidaquad/stability.hpp"

namespace pidaquad::cli {

namespace fs = std::filesystem;

namespace {

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

fs::path prepare_out_dir(const std::string& dir) {
  fs::path p(dir);
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + dir + ": " + ec.message());
  return p;
}

// Maps exceptions onto the documented exit codes.
template <typename Fn>
int guarded(const CommandOptions& options, Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    *options.err << "config error: " << e.what() << "\n";
  } catch (const NotEquilibriumError& e) {
    *options.err << "config error: " << e.what() << "\n";
  } catch (const std::invalid_argument& e) {
    *options.err << "config error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    *options.err << "error: " << e.what() << "\n";
  }
  return kExitConfigError;
}

gf::GfConfig filter_config(const sim::EstimatorSettings& est, Eigen::VectorXd init_spread,
                           Eigen::VectorXd mutation_scale, std::uint64_t seed) {
  gf::GfConfig c;
  c.population_size = est.population_size;
  c.max_generations = est.max_generations;
  c.mutation_rate = est.mutation_rate;
  c.elite_count = est.elite_count;
  c.noise_injection = est.noise_injection;
  c.init_spread = std::move(init_spread);
  c.mutation_scale = std::move(mutation_scale);
  c.seed = seed;
  return c;
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string read_gains_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open gains file");
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

}  // namespace

ChannelGains load_gains_file(const std::string& path) {
  return parse_gains_fragment(read_gains_text(path), path, default_gains());
}

RunConfig load_run_config(const CommandOptions& options) {
  RunConfig cfg = load_config(options.config_path);
  if (options.gains_path) {
    cfg.scenario.gains = parse_gains_fragment(read_gains_text(*options.gains_path),
                                              *options.gains_path, cfg.scenario.gains);
  }
  if (options.seed) {
    cfg.scenario.seed = *options.seed;
    cfg.sdsa.seed = *options.seed;
    cfg.filter_demo.linear.seed = *options.seed;
    cfg.filter_demo.altitude.seed = *options.seed;
  }
  if (options.jobs < 1) throw ConfigError("--jobs must be >= 1");
  cfg.sdsa.jobs = options.jobs;
  return cfg;
}

int cmd_simulate(const CommandOptions& options) {
  return guarded(options, [&] {
    const RunConfig cfg = load_run_config(options);
    const fs::path out = prepare_out_dir(options.out_dir);
    const sim::RunResult run = sim::run_scenario(cfg.scenario);
    {
      std::ofstream ts = open_output(out / (cfg.name + "_timeseries.csv"));
      write_timeseries_csv(ts, run.series);
    }
    {
      std::ofstream mc = open_output(out / (cfg.name + "_metrics.csv"));
      write_metrics_csv(mc, run.metrics);
    }
    {
      std::ofstream mt = open_output(out / (cfg.name + "_metrics.txt"));
      write_metrics_text(mt, run.metrics);
    }
    write_metrics_text(*options.out, run.metrics);
    if (run.metrics.diverged) {
      *options.err << "simulation diverged: " << run.metrics.divergence_reason << "\n";
      return static_cast<int>(kExitDiverged);
    }
    return static_cast<int>(kExitOk);
  });
}

int cmd_tune(const CommandOptions& options) {
  return guarded(options, [&] {
    const RunConfig cfg = load_run_config(options);
    if (!cfg.has_sdsa) throw ConfigError(options.config_path + ": 'sdsa' section is required");
    if (cfg.scenario.commands.kind != sim::CommandKind::kStep) {
      throw ConfigError(options.config_path + ": 'scenario.commands.type' must be step");
    }
    const fs::path out = prepare_out_dir(options.out_dir);
    const TuneResult tuned = tune_gains(cfg.scenario, cfg.sdsa, cfg.warm_start, cfg.tuning);
    {
      std::ofstream g = open_output(out / "gains.cfg");
      g << "schema_version: " << kSchemaVersion << "\n" << gains_fragment(tuned.gains);
    }
    {
      std::ofstream c = open_output(out / "convergence.csv");
      c << "iteration,best_cost\n";
      for (std::size_t i = 0; i < tuned.search.history.size(); ++i) {
        c << i << ',' << format_number(tuned.search.history[i]) << '\n';
      }
    }
    *options.out << "iterations=" << tuned.search.iterations << "\n"
                 << "evaluations=" << tuned.search.evaluations << "\n"
                 << "initialCost=" << format_number(tuned.search.history.front()) << "\n"
                 << "bestCost=" << format_number(tuned.search.best_cost) << "\n";

    sim::Scenario check = cfg.scenario;
    check.gains = tuned.gains;
    const sim::RunResult run = sim::run_scenario(check);
    write_metrics_text(*options.out, run.metrics);
    return static_cast<int>(run.metrics.diverged ? kExitDiverged : kExitOk);
  });
}

int cmd_stability(const CommandOptions& options) {
  return guarded(options, [&] {
    const RunConfig cfg = load_run_config(options);
    const QuadParams& params = cfg.scenario.params;
    const double altitude = cfg.stability.altitude.value_or(cfg.scenario.initial_state.altitude());
    ControlInput input = hover_input(params);
    if (cfg.stability.thrust) input.u_T = *cfg.stability.thrust;
    const LinearModel plant =
        linearize(hover_state(altitude), input, params, LinearStateSet::kWithAltitude);
    const Eigen::MatrixXd Acl =
        stability::closed_loop_matrix(augment_tracking(plant), cfg.scenario.gains);
    const stability::StabilityReport report = stability::analyze(Acl);

    std::ostream& os = *options.out;
    os << "dimension=" << Acl.rows() << "\n"
       << "eigenvalueCount=" << report.eigenvalues.size() << "\n"
       << "maxRealPart=" << format_number(report.max_real_part) << "\n"
       << "isHurwitz=" << (report.is_hurwitz ? 1 : 0) << "\n";
    bool pd = false;
    if (report.lyapunov_p) {
      pd = *report.p_min_eigenvalue > 0.0;
      os << "pMinEigenvalue=" << format_number(*report.p_min_eigenvalue) << "\n"
         << "lyapunovResidual=" << format_number(*report.lyapunov_residual) << "\n";
    }
    os << "positiveDefiniteP=" << (pd ? 1 : 0) << "\n";
    for (std::size_t i = 0; i < report.eigenvalues.size(); ++i) {
      os << "eigenvalue[" << i << "]=" << format_number(report.eigenvalues[i].real()) << ","
         << format_number(report.eigenvalues[i].imag()) << "\n";
    }

    const fs::path out = prepare_out_dir(options.out_dir);
    {
      std::ofstream ev = open_output(out / (cfg.name + "_eigenvalues.csv"));
      ev << "real,imag\n";
      for (const auto& z : report.eigenvalues) {
        ev << format_number(z.real()) << ',' << format_number(z.imag()) << '\n';
      }
    }

    // Frozen-time spectra along noisy closed-loop trajectories.
    if (cfg.stability.trajectory_runs > 0) {
      const int runs = cfg.stability.trajectory_runs;
      const std::size_t stride = std::max<std::size_t>(
          1, static_cast<std::size_t>(std::llround(cfg.stability.sample_period / cfg.scenario.dt)));
      auto sample_run = [&](int r) {
        sim::Scenario s = cfg.scenario;
        s.seed = cfg.scenario.seed + static_cast<std::uint64_t>(r);
        const sim::RunResult run = sim::run_scenario(s);
        std::vector<std::pair<double, double>> rows;
        for (std::size_t k = 0; k < run.series.records.size(); k += stride) {
          const sim::StepRecord& rec = run.series.records[k];
          const LinearModel local =
              jacobian(rec.state, rec.control, params, LinearStateSet::kWithAltitude);
          const Eigen::MatrixXd A =
              stability::closed_loop_matrix(augment_tracking(local), cfg.scenario.gains);
          rows.emplace_back(rec.t, stability::max_real_part(stability::eigenvalues(A)));
        }
        return rows;
      };
      std::vector<std::vector<std::pair<double, double>>> results(static_cast<std::size_t>(runs));
      for (int start = 0; start < runs; start += options.jobs) {
        std::vector<std::future<std::vector<std::pair<double, double>>>> batch;
        const int end = std::min(runs, start + options.jobs);
        for (int r = start; r < end; ++r) {
          batch.push_back(std::async(options.jobs > 1 ? std::launch::async : std::launch::deferred,
                                     sample_run, r));
        }
        for (int r = start; r < end; ++r) results[static_cast<std::size_t>(r)] = batch[r - start].get();
      }
      std::ofstream tc = open_output(out / (cfg.name + "_trajectory_spectra.csv"));
      tc << "run,t,max_real_part\n";
      std::vector<double> all;
      for (int r = 0; r < runs; ++r) {
        for (const auto& [t, m] : results[static_cast<std::size_t>(r)]) {
          tc << r << ',' << format_number(t) << ',' << format_number(m) << '\n';
          all.push_back(m);
        }
      }
      if (!all.empty()) {
        os << "trajectorySamples=" << all.size() << "\n"
           << "trajectoryMaxRealPart.min=" << format_number(*std::min_element(all.begin(), all.end()))
           << "\n"
           << "trajectoryMaxRealPart.median=" << format_number(median(all)) << "\n"
           << "trajectoryMaxRealPart.max=" << format_number(*std::max_element(all.begin(), all.end()))
           << "\n";
      }
    }
    return static_cast<int>(report.is_hurwitz && pd ? kExitOk : kExitUnstable);
  });
}

int cmd_filter_demo(const CommandOptions& options) {
  return guarded(options, [&] {
    const RunConfig cfg = load_run_config(options);
    if (!cfg.has_estimator) {
      throw ConfigError(options.config_path + ": 'estimator' section is required");
    }
    const sim::EstimatorSettings& est = cfg.scenario.estimator;
    const fs::path out = prepare_out_dir(options.out_dir);

    // Scalar linear-Gaussian benchmark against the Kalman oracle.
    const LinearBenchmarkSettings& lin = cfg.filter_demo.linear;
    const LinearBenchmark bench = simulate_linear_benchmark(lin.a, lin.process_std,
                                                            lin.measurement_std, lin.steps, lin.seed);
    gf::SystemModel linear_model;
    const double a = lin.a;
    linear_model.propagate = [a](const Eigen::VectorXd& x, const Eigen::VectorXd& w) {
      return Eigen::VectorXd(a * x + w);
    };
    linear_model.measure = [](const Eigen::VectorXd& x) { return x; };
    linear_model.process_noise_std = Eigen::VectorXd::Constant(1, lin.process_std);
    linear_model.measurement_noise_std = Eigen::VectorXd::Constant(1, lin.measurement_std);
    gf::GeneticFilter linear_gf(
        linear_model,
        filter_config(est, Eigen::VectorXd::Constant(1, lin.init_spread),
                      Eigen::VectorXd::Constant(1, lin.mutation_scale), lin.seed),
        Eigen::VectorXd::Zero(1));
    ScalarKalman kalman(lin.a, lin.process_std, lin.measurement_std);
    std::vector<double> gf_est, kf_est;
    for (double z : bench.measurements) {
      gf_est.push_back(linear_gf.update(Eigen::VectorXd::Constant(1, z))(0));
      kf_est.push_back(kalman.update(z));
    }
    const double linear_gf_rmse = rmse(gf_est, bench.truth);
    const double linear_kf_rmse = rmse(kf_est, bench.truth);
    const double linear_raw_rmse = rmse(bench.measurements, bench.truth);

    // Altitude channel: random-acceleration truth, constant-velocity model.
    const AltitudeDemoSettings& alt = cfg.filter_demo.altitude;
    const int steps = static_cast<int>(std::llround(alt.duration / alt.dt));
    std::mt19937_64 rng(alt.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    double h = cfg.scenario.initial_state.altitude();
    double hdot = 0.0;
    const double dt = alt.dt;
    gf::SystemModel alt_model;
    alt_model.propagate = [dt](const Eigen::VectorXd& x, const Eigen::VectorXd& w) {
      Eigen::VectorXd next(2);
      next << x(0) + dt * x(1) + w(0), x(1) + w(1);
      return next;
    };
    alt_model.measure = [](const Eigen::VectorXd& x) { return Eigen::VectorXd::Constant(1, x(0)); };
    alt_model.process_noise_std = Eigen::Vector2d(0.5 * dt * dt * alt.accel_std, dt * alt.accel_std);
    alt_model.measurement_noise_std = Eigen::VectorXd::Constant(1, alt.measurement_std);
    gf::GeneticFilter alt_gf(alt_model,
                             filter_config(est, est.altitude.init_spread,
                                           est.altitude.mutation_scale, alt.seed + 1),
                             Eigen::Vector2d(h, 0.0));
    std::vector<double> truth, meas, alt_est;
    for (int k = 0; k < steps; ++k) {
      const double acc = alt.accel_std * normal(rng);
      h += dt * hdot + 0.5 * dt * dt * acc;
      hdot += dt * acc;
      const double z = h + alt.measurement_std * normal(rng);
      truth.push_back(h);
      meas.push_back(z);
      alt_est.push_back(alt_gf.update(Eigen::VectorXd::Constant(1, z))(0));
    }
    const double alt_gf_rmse = rmse(alt_est, truth);
    const double alt_raw_rmse = rmse(meas, truth);

    {
      std::ofstream r = open_output(out / "rmse.csv");
      r << "benchmark,estimator,rmse\n"
        << "linear,gf," << format_number(linear_gf_rmse) << "\n"
        << "linear,kalman," << format_number(linear_kf_rmse) << "\n"
        << "linear,measurement," << format_number(linear_raw_rmse) << "\n"
        << "altitude,gf," << format_number(alt_gf_rmse) << "\n"
        << "altitude,measurement," << format_number(alt_raw_rmse) << "\n";
    }
    *options.out << "linear.gf=" << format_number(linear_gf_rmse) << "\n"
                 << "linear.kalman=" << format_number(linear_kf_rmse) << "\n"
                 << "linear.ratio=" << format_number(linear_gf_rmse / linear_kf_rmse) << "\n"
                 << "altitude.gf=" << format_number(alt_gf_rmse) << "\n"
                 << "altitude.measurement=" << format_number(alt_raw_rmse) << "\n";
    return static_cast<int>(kExitOk);
  });
}

}  // namespace pidaquad::cli
