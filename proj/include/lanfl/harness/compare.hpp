/*
 * Copyright 2026 The lanfl Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lanfl/accounting/metrics.hpp"

namespace lanfl::harness {

struct MetricsSeries {
  std::string name;
  std::vector<accounting::RoundMetrics> rounds;  // cloud_round, cumulative_*, accuracy filled
};

/// Parses metrics.csv text; throws std::runtime_error on a malformed file.
MetricsSeries parse_metrics_csv(std::string_view text, std::string name);
MetricsSeries load_run_dir(const std::filesystem::path& dir);

struct CrossingPoint {
  int round = 0;
  double clock_hours = 0.0;
  double wan_traffic_gib = 0.0;
  double cost_usd = 0.0;
};

struct ComparisonRow {
  std::string name;
  std::optional<CrossingPoint> reached;  // empty when the target is never hit
  // Baseline value over this run's value (>1 means this run is cheaper).
  std::optional<double> speedup;
  std::optional<double> traffic_ratio;
  std::optional<double> cost_ratio;
};

/// First round at which accuracy >= target (fraction).
std::optional<CrossingPoint> first_reaching(const MetricsSeries& series, double target_accuracy);

/// Compares every series against the first one at `target_accuracy`.
std::vector<ComparisonRow> compare_runs(std::span<const MetricsSeries> runs, double target_accuracy);

/// Fixed-width text table; unreachable cells print "n/a".
std::string format_comparison(std::span<const ComparisonRow> rows, double target_accuracy);

}  // namespace lanfl::harness
