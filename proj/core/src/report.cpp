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

#include "pidaquad/report.hpp"

#include <array>
#include <cmath>
#include <iomanip>
#include <limits>
#include <locale>
#include <sstream>

namespace pidaquad {

namespace {

constexpr std::array<const char*, kChannelCount> kChannelKeys = {"roll", "pitch", "yaw",
                                                                  "altitude"};

void write_row(std::ostream& os, const std::vector<double>& values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) os << ',';
    os << format_number(values[i]);
  }
  os << '\n';
}

}  // namespace

std::string format_number(double value) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::setprecision(std::numeric_limits<double>::max_digits10) << value;
  return os.str();
}

std::vector<std::string> timeseries_columns() {
  std::vector<std::string> cols = {"t",  "phi", "theta", "psi", "p",  "q",  "r",
                                   "u",  "v",   "w",     "xE",  "yE", "zE"};
  for (const char* prefix : {"meas_", "est_", "cmd_"}) {
    for (const char* ch : kChannelKeys) cols.push_back(std::string(prefix) + ch);
  }
  for (const char* c : {"u_phi", "u_theta", "u_psi", "u_T", "F1", "F2", "F3", "F4"}) {
    cols.emplace_back(c);
  }
  return cols;
}

void write_timeseries_csv(std::ostream& os, const sim::TimeSeries& series) {
  const std::vector<std::string> cols = timeseries_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << '\n';
  std::vector<double> row;
  row.reserve(cols.size());
  for (const sim::StepRecord& r : series.records) {
    row.clear();
    row.push_back(r.t);
    const Vector12d x = r.state.to_vector();
    row.insert(row.end(), x.data(), x.data() + x.size());
    row.insert(row.end(), r.measured.begin(), r.measured.end());
    row.insert(row.end(), r.estimated.begin(), r.estimated.end());
    row.insert(row.end(), r.command.begin(), r.command.end());
    row.insert(row.end(), {r.control.u_phi, r.control.u_theta, r.control.u_psi, r.control.u_T});
    row.insert(row.end(), {r.forces.F1, r.forces.F2, r.forces.F3, r.forces.F4});
    write_row(os, row);
  }
}

std::vector<std::pair<std::string, std::string>> metrics_fields(const sim::RunMetrics& m) {
  std::vector<std::pair<std::string, std::string>> out;
  out.emplace_back("diverged", m.diverged ? "1" : "0");
  out.emplace_back("maxAbsError", format_number(m.max_abs_channel_error()));
  for (std::size_t c = 0; c < kChannelCount; ++c) {
    const std::string k = kChannelKeys[c];
    out.emplace_back(k + ".rms", format_number(m.channel_error[c].rms));
    out.emplace_back(k + ".maxAbs", format_number(m.channel_error[c].max_abs));
    out.emplace_back(k + ".finalMean", format_number(m.channel_error[c].final_mean));
  }
  if (m.position_error) {
    out.emplace_back("position.rms", format_number(m.position_error->rms));
    out.emplace_back("position.maxAbs", format_number(m.position_error->max_abs));
    out.emplace_back("position.finalMean", format_number(m.position_error->final_mean));
  }
  for (std::size_t c = 0; c < kChannelCount; ++c) {
    if (!m.step[c]) continue;
    const std::string k = kChannelKeys[c];
    const StepMetrics& s = *m.step[c];
    out.emplace_back(k + ".overshoot", format_number(s.overshoot));
    out.emplace_back(k + ".settlingTime", format_number(s.settling_time));
    out.emplace_back(k + ".riseTime", format_number(s.rise_time));
    out.emplace_back(k + ".steadyStateError", format_number(s.steady_state_error));
    out.emplace_back(k + ".settled", s.settled ? "1" : "0");
  }
  return out;
}

void write_metrics_text(std::ostream& os, const sim::RunMetrics& metrics) {
  for (const auto& [k, v] : metrics_fields(metrics)) os << k << '=' << v << '\n';
}

void write_metrics_csv(std::ostream& os, const sim::RunMetrics& metrics) {
  const auto fields = metrics_fields(metrics);
  for (std::size_t i = 0; i < fields.size(); ++i) os << (i ? "," : "") << fields[i].first;
  os << '\n';
  for (std::size_t i = 0; i < fields.size(); ++i) os << (i ? "," : "") << fields[i].second;
  os << '\n';
}

}  // namespace pidaquad
