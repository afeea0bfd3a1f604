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

#include <cmath>
#include <numbers>
#include <sstream>

#include "pidaquad/report.hpp"
#include "pidaquad/simulation.hpp"

namespace pidaquad::sim {
namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

Scenario hover_scenario() {
  Scenario s;
  s.name = "hover";
  s.duration = 10.0;
  s.initial_state.zE = -50.0;
  s.commands.initial = {0, 0, 0, 50.0};
  s.sensor_noise = {0, 0, 0, 0};
  return s;
}

Scenario open_loop_scenario(std::uint64_t seed) {
  Scenario s = hover_scenario();
  s.controller_enabled = false;
  s.disturbance.enabled = true;
  s.disturbance.channel = Channel::kRoll;
  s.disturbance.start_time = 1.0;
  s.seed = seed;
  return s;
}

TEST(WhiteNoiseTest, ZeroSigmaIsConstant) {
  WhiteNoise n(0.7, 0.0, 3);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(n.next(), 0.7);
}

TEST(WhiteNoiseTest, MomentsOfStandardNormal) {
  WhiteNoise n(0.0, 1.0, 11);
  const int count = 1000000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < count; ++i) {
    const double x = n.next();
    sum += x;
    sq += x * x;
  }
  const double mean = sum / count;
  const double sd = std::sqrt(sq / count - mean * mean);
  EXPECT_NEAR(mean, 0.0, 0.01);
  EXPECT_NEAR(sd, 1.0, 0.01);
}

TEST(WhiteNoiseTest, SameSeedSameStream) {
  WhiteNoise a(1.0, 2.0, 99), b(1.0, 2.0, 99);
  for (int i = 0; i < 1000; ++i) EXPECT_EQ(a.next(), b.next());
}

TEST(SpiralTest, StartPoint) {
  const Eigen::Vector3d p = spiral_reference(0.0, kDefaultSpiralOmega);
  EXPECT_DOUBLE_EQ(p.x(), 2.0);
  EXPECT_DOUBLE_EQ(p.y(), 2.0);
  EXPECT_DOUBLE_EQ(p.z(), 0.0);
}

TEST(SpiralTest, ClimbAtEndTime) {
  EXPECT_NEAR(spiral_reference(60.0, 1.0 / (2.0 * std::numbers::pi)).z(), 18.0, 1e-12);
}

TEST(SpiralTest, MatchesPathFormulaAndDerivatives) {
  const double w = 0.3;
  for (double t : {0.0, 1.7, 12.5, 41.0}) {
    const Eigen::Vector3d p = spiral_reference(t, w);
    EXPECT_NEAR(p.x(), 2 * std::sin(3 * w * t) + 2 * std::cos(w * t), 1e-14);
    EXPECT_NEAR(p.y(), 2 * std::sin(w * t) + 2 * std::cos(3 * w * t), 1e-14);
    const double h = 1e-5;
    const Eigen::Vector3d fd_v = (spiral_reference(t + h, w) - spiral_reference(t - h, w)) / (2 * h);
    const Eigen::Vector3d fd_a = (spiral_velocity(t + h, w) - spiral_velocity(t - h, w)) / (2 * h);
    EXPECT_LT((fd_v - spiral_velocity(t, w)).norm(), 1e-8);
    EXPECT_LT((fd_a - spiral_acceleration(t, w)).norm(), 1e-8);
  }
}

TEST(ScenarioTest, ValidateRejectsBadTiming) {
  Scenario s;
  EXPECT_NO_THROW(s.validate());
  EXPECT_EQ(s.steps(), 10000u);
  s.dt = 0.0;
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s = Scenario{};
  s.duration = 1.0005;
  EXPECT_THROW(s.validate(), std::invalid_argument);
}

TEST(RunScenarioTest, HoverHoldsEquilibrium) {
  const RunResult r = run_scenario(hover_scenario());
  EXPECT_FALSE(r.metrics.diverged);
  EXPECT_LT(r.metrics.max_abs_channel_error(), 1e-6);
  double worst = 0.0;
  for (const StepRecord& rec : r.series.records) {
    const QuadState& x = rec.state;
    for (double v : {x.phi, x.theta, x.psi, x.p, x.q, x.r}) worst = std::max(worst, std::abs(v));
    EXPECT_LT(std::abs(x.altitude() - 50.0), 1e-6);
  }
  EXPECT_LT(worst, 1e-6);
}

TEST(RunScenarioTest, SeriesIsUniform) {
  const RunResult r = run_scenario(hover_scenario());
  ASSERT_EQ(r.series.records.size(), hover_scenario().steps() + 1);
  for (std::size_t i = 0; i < r.series.records.size(); ++i) {
    EXPECT_NEAR(r.series.records[i].t, static_cast<double>(i) * 0.001, 1e-9);
  }
}

TEST(RunScenarioTest, OpenLoopRollDisturbanceDestabilizes) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const RunResult r = run_scenario(open_loop_scenario(seed));
    EXPECT_TRUE(r.metrics.diverged || max_tilt_excursion(r.series) > 10 * kDeg) << seed;
  }
}

TEST(RunScenarioTest, DeterministicUnderSeed) {
  Scenario s = hover_scenario();
  s.duration = 2.0;
  s.sensor_noise = {0.01, 0.01, 0.01, 0.05};
  s.estimator.enabled = true;
  s.seed = 17;
  const RunResult a = run_scenario(s);
  const RunResult b = run_scenario(s);
  std::ostringstream ca, cb;
  write_timeseries_csv(ca, a.series);
  write_timeseries_csv(cb, b.series);
  EXPECT_EQ(ca.str(), cb.str());
  s.seed = 18;
  std::ostringstream cc;
  write_timeseries_csv(cc, run_scenario(s).series);
  EXPECT_NE(ca.str(), cc.str());
}

TEST(RunScenarioTest, RotorForcesStayWithinLimits) {
  Scenario s = hover_scenario();
  s.duration = 6.0;
  s.commands.kind = CommandKind::kStep;
  s.commands.final = {-5 * kDeg, 10 * kDeg, 30 * kDeg, 20.0};
  s.sensor_noise = {0.01, 0.01, 0.01, 0.05};
  const RunResult r = run_scenario(s);
  const double fmax = s.params.max_rotor_force();
  for (const StepRecord& rec : r.series.records) {
    for (double f : {rec.forces.F1, rec.forces.F2, rec.forces.F3, rec.forces.F4}) {
      EXPECT_GE(f, 0.0);
      EXPECT_LE(f, fmax);
    }
  }
}

TEST(RunScenarioTest, StepProfileSwitchesAtStepTime) {
  Scenario s = hover_scenario();
  s.duration = 3.0;
  s.commands.kind = CommandKind::kStep;
  s.commands.final = {0, 0, 0, 45.0};
  const RunResult r = run_scenario(s);
  EXPECT_EQ(r.series.records[1999].command[3], 50.0);
  EXPECT_EQ(r.series.records[2000].command[3], 45.0);
  ASSERT_TRUE(r.metrics.step[3].has_value());
  EXPECT_FALSE(r.metrics.step[0].has_value());
}

TEST(RunScenarioTest, SpiralCarriesPositionReference) {
  Scenario s = hover_scenario();
  s.duration = 1.0;
  s.commands.kind = CommandKind::kSpiral;
  s.commands.altitude_offset = 50.0;
  s.initial_state.xE = 2.0;
  s.initial_state.yE = 2.0;
  const RunResult r = run_scenario(s);
  ASSERT_TRUE(r.series.records.front().position_reference.has_value());
  EXPECT_TRUE(r.metrics.position_error.has_value());
  const StepRecord& first = r.series.records.front();
  EXPECT_NEAR((*first.position_reference - Eigen::Vector3d(2.0, 2.0, 50.0)).norm(), 0.0, 1e-12);
  EXPECT_FALSE(r.metrics.diverged);
}

TEST(RunScenarioTest, GeneticFilterSmoothsAltitudeMeasurements) {
  Scenario s = hover_scenario();
  s.duration = 5.0;
  s.sensor_noise = {0.0, 0.0, 0.0, 0.05};
  s.estimator.enabled = true;
  s.estimator.filter_attitude = false;
  const RunResult r = run_scenario(s);
  double meas = 0.0, est = 0.0;
  for (const StepRecord& rec : r.series.records) {
    const double h = rec.state.altitude();
    meas += (rec.measured[3] - h) * (rec.measured[3] - h);
    est += (rec.estimated[3] - h) * (rec.estimated[3] - h);
  }
  EXPECT_LT(est, meas);
}

TimeSeries synthetic_series(double offset_roll, double amplitude_pitch, std::size_t n) {
  TimeSeries ts;
  ts.dt = 0.001;
  for (std::size_t i = 0; i < n; ++i) {
    StepRecord r;
    r.t = static_cast<double>(i) * ts.dt;
    r.state.phi = 0.1;
    r.state.theta = 0.2 + amplitude_pitch * std::sin(2 * std::numbers::pi * 5.0 * r.t);
    r.state.zE = -10.0;
    r.command = {0.1 + offset_roll, 0.2, 0.0, 10.0};
    ts.records.push_back(r);
  }
  return ts;
}

TEST(TrackingErrorTest, PerfectTrackingIsZero) {
  const RunMetrics m = tracking_error(synthetic_series(0.0, 0.0, 1000));
  for (const AxisError& e : m.channel_error) {
    EXPECT_NEAR(e.rms, 0.0, 1e-15);
    EXPECT_NEAR(e.max_abs, 0.0, 1e-15);
  }
  EXPECT_FALSE(m.position_error.has_value());
}

TEST(TrackingErrorTest, ConstantOffset) {
  const RunMetrics m = tracking_error(synthetic_series(1.0, 0.0, 1000));
  EXPECT_NEAR(m.channel_error[0].rms, 1.0, 1e-12);
  EXPECT_NEAR(m.channel_error[0].max_abs, 1.0, 1e-12);
  EXPECT_NEAR(m.channel_error[1].rms, 0.0, 1e-15);
}

TEST(TrackingErrorTest, SinusoidRms) {
  const double A = 0.3;
  const RunMetrics m = tracking_error(synthetic_series(0.0, A, 2001));
  EXPECT_NEAR(m.channel_error[1].rms, A / std::sqrt(2.0), 0.01 * A / std::sqrt(2.0));
}

TEST(ReportTest, ColumnOrder) {
  const auto cols = timeseries_columns();
  ASSERT_EQ(cols.size(), 33u);
  EXPECT_EQ(cols.front(), "t");
  EXPECT_EQ(cols[1], "phi");
  EXPECT_EQ(cols[12], "zE");
  EXPECT_EQ(cols.back(), "F4");
}

TEST(ReportTest, NumbersRoundTrip) {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-17, 12345.678901234567, 0.0}) {
    EXPECT_EQ(std::stod(format_number(v)), v);
  }
}

TEST(ReportTest, CsvShapeAndMetricsKeys) {
  Scenario s = hover_scenario();
  s.duration = 0.01;
  const RunResult r = run_scenario(s);
  std::ostringstream csv;
  write_timeseries_csv(csv, r.series);
  std::istringstream in(csv.str());
  std::string line;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 32);
    ++rows;
  }
  EXPECT_EQ(rows, r.series.records.size() + 1);
  std::ostringstream txt;
  write_metrics_text(txt, r.metrics);
  EXPECT_NE(txt.str().find("maxAbsError="), std::string::npos);
  EXPECT_NE(txt.str().find("diverged=0"), std::string::npos);
}

}  // namespace
}  // namespace pidaquad::sim
