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

#ifndef PIDAQUAD_REPORT_HPP
#define PIDAQUAD_REPORT_HPP

#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "pidaquad/simulation.hpp"

namespace pidaquad {

/// Shortest decimal text that round-trips (17 significant digits).
std::string format_number(double value);

/// Column names of the time-series CSV, in output order.
std::vector<std::string> timeseries_columns();

/// Header plus one row per record.
void write_timeseries_csv(std::ostream& os, const sim::TimeSeries& series);

/// Flat (key, value) view of the metrics, in a fixed order.
std::vector<std::pair<std::string, std::string>> metrics_fields(const sim::RunMetrics& metrics);

/// One `key=value` line per field.
void write_metrics_text(std::ostream& os, const sim::RunMetrics& metrics);

/// Header row plus one value row.
void write_metrics_csv(std::ostream& os, const sim::RunMetrics& metrics);

}  // namespace pidaquad

#endif  // PIDAQUAD_REPORT_HPP
