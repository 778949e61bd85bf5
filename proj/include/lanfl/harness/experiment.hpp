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
#include <string>
#include <vector>

#include <json.hpp>

#include "lanfl/harness/config.hpp"
#include "lanfl/orchestrator/protocol.hpp"
#include "lanfl/orchestrator/world.hpp"

namespace lanfl::harness {

/// Environment variable that, when set, anchors relative output directories.
inline constexpr const char* kOutputRootEnv = "LANFL_OUTPUT_ROOT";

struct Environment {
  orchestrator::World world;
  orchestrator::Workload workload;
};

/// Generates the synthetic dataset, partitions it across devices, splits each
/// device 80/20 and lays out the LANs. Accounting-only configs get a world with
/// `samples_per_device` samples per device and no shards.
Environment build_environment(const RunConfig& cfg);

struct RunSummary {
  std::string protocol;
  int cloud_rounds = 0;
  double final_accuracy = 0.0;
  double wan_traffic_gib = 0.0;
  std::uint64_t wan_traffic_gib_floor = 0;
  double clock_seconds = 0.0;
  double clock_hours = 0.0;  // rounded to 2 decimals
  double cost_usd = 0.0;
  int convergence_round = 0;  // 0: not converged
  double converged_accuracy = 0.0;
  std::vector<int> lan_device_counts;
};

struct ExperimentResult {
  orchestrator::RunLog log;
  RunSummary summary;
  std::filesystem::path out_dir;
};

orchestrator::RunLog run_protocol(const RunConfig& cfg, const Environment& env,
                                  const orchestrator::RunOptions& options = {});

RunSummary summarize(const RunConfig& cfg, const orchestrator::RunLog& log);

/// RFC-4180 CSV with header cloud_round,clock_hours,wan_traffic_gb,accuracy,cost_usd
/// and LF line endings.
std::string metrics_csv(const std::vector<accounting::RoundMetrics>& metrics);

nlohmann::ordered_json summary_json(const RunConfig& cfg, const RunSummary& summary);

/// `override_dir` (the CLI --out) wins over cfg.output_dir; a relative result is
/// placed under $LANFL_OUTPUT_ROOT when that is set.
std::filesystem::path resolve_output_dir(const RunConfig& cfg,
                                         const std::optional<std::string>& override_dir = std::nullopt);

/// Runs the configured protocol and writes config.json, metrics.csv and
/// summary.json into `out_dir`.
ExperimentResult run_experiment(const RunConfig& cfg, const std::filesystem::path& out_dir);

/// Cartesian product over a grid of dotted config paths to value lists, e.g.
/// {"train.local_epochs": [1, 2, 10]}. Each variant is validated and run into
/// its own subdirectory of `out_root`; the directories are returned in order.
std::vector<std::filesystem::path> run_sweep(const RunConfig& base, const nlohmann::json& grid,
                                             const std::filesystem::path& out_root);

}  // namespace lanfl::harness
