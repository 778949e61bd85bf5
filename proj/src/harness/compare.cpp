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

#include "lanfl/harness/compare.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

namespace lanfl::harness {

namespace {

constexpr std::string_view kHeader = "cloud_round,clock_hours,wan_traffic_gb,accuracy,cost_usd";

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

std::optional<double> ratio(double baseline, double value) {
  if (value <= 0.0) return std::nullopt;
  return baseline / value;
}

std::string cell(const std::optional<double>& v, const char* spec) {
  return v ? fmt::format(fmt::runtime(spec), *v) : std::string("n/a");
}

}  // namespace

MetricsSeries parse_metrics_csv(std::string_view text, std::string name) {
  MetricsSeries series;
  series.name = std::move(name);
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != kHeader) {
    throw std::runtime_error(series.name + ": metrics.csv header mismatch");
  }
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != 5) {
      throw std::runtime_error(series.name + ": metrics.csv line " + std::to_string(line_no) +
                               " has " + std::to_string(cells.size()) + " fields");
    }
    accounting::RoundMetrics m;
    try {
      m.cloud_round = std::stoi(cells[0]);
      m.cumulative_clock_hours = std::stod(cells[1]);
      m.cumulative_wan_traffic_gib = std::stod(cells[2]);
      m.accuracy = std::stod(cells[3]);
      m.cumulative_cost = std::stod(cells[4]);
    } catch (const std::exception&) {
      throw std::runtime_error(series.name + ": metrics.csv line " + std::to_string(line_no) +
                               " is not numeric");
    }
    series.rounds.push_back(m);
  }
  return series;
}

MetricsSeries load_run_dir(const std::filesystem::path& dir) {
  std::ifstream in(dir / "metrics.csv", std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + (dir / "metrics.csv").string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_metrics_csv(buf.str(), dir.filename().empty() ? dir.parent_path().filename().string()
                                                             : dir.filename().string());
}

std::optional<CrossingPoint> first_reaching(const MetricsSeries& series, double target_accuracy) {
  for (const auto& m : series.rounds) {
    if (m.accuracy >= target_accuracy) {
      return CrossingPoint{m.cloud_round, m.cumulative_clock_hours, m.cumulative_wan_traffic_gib,
                           m.cumulative_cost};
    }
  }
  return std::nullopt;
}

std::vector<ComparisonRow> compare_runs(std::span<const MetricsSeries> runs, double target_accuracy) {
  if (runs.size() < 2) throw std::invalid_argument("compare_runs: need at least 2 runs");
  std::vector<ComparisonRow> rows;
  const auto baseline = first_reaching(runs.front(), target_accuracy);
  for (const auto& run : runs) {
    ComparisonRow row;
    row.name = run.name;
    row.reached = first_reaching(run, target_accuracy);
    if (baseline && row.reached) {
      row.speedup = ratio(baseline->clock_hours, row.reached->clock_hours);
      row.traffic_ratio = ratio(baseline->wan_traffic_gib, row.reached->wan_traffic_gib);
      row.cost_ratio = ratio(baseline->cost_usd, row.reached->cost_usd);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string format_comparison(std::span<const ComparisonRow> rows, double target_accuracy) {
  std::string out = fmt::format("target accuracy {:.4f}\n", target_accuracy);
  out += fmt::format("{:<24} {:>7} {:>12} {:>14} {:>12} {:>9} {:>9} {:>9}\n", "run", "round", "clock_h",
                     "wan_gib", "cost_usd", "speedup", "traffic", "cost");
  for (const auto& r : rows) {
    const auto& p = r.reached;
    out += fmt::format("{:<24} {:>7} {:>12} {:>14} {:>12} {:>9} {:>9} {:>9}\n", r.name,
                       p ? std::to_string(p->round) : "n/a",
                       cell(p ? std::optional(p->clock_hours) : std::nullopt, "{:.2f}"),
                       cell(p ? std::optional(p->wan_traffic_gib) : std::nullopt, "{:.3f}"),
                       cell(p ? std::optional(p->cost_usd) : std::nullopt, "{:.2f}"),
                       cell(r.speedup, "{:.2f}x"), cell(r.traffic_ratio, "{:.2f}x"),
                       cell(r.cost_ratio, "{:.2f}x"));
  }
  return out;
}

}  // namespace lanfl::harness
