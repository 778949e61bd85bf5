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

#include "lanfl/harness/experiment.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>

#include <fmt/format.h>

#include "lanfl/core/data.hpp"
#include "lanfl/core/rng.hpp"

namespace lanfl::harness {

namespace fs = std::filesystem;
using orchestrator::RunLog;

namespace {

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::string sanitize(const std::string& s) {
  std::string out;
  for (const char ch : s) {
    const bool keep = std::isalnum(static_cast<unsigned char>(ch)) || ch == '.' || ch == '-' || ch == '_';
    out += keep ? ch : '_';
  }
  return out;
}

nlohmann::json::json_pointer to_pointer(const std::string& dotted) {
  std::string p = "/" + dotted;
  std::replace(p.begin(), p.end(), '.', '/');
  return nlohmann::json::json_pointer(p);
}

std::string leaf_name(const std::string& dotted) {
  const auto dot = dotted.find_last_of('.');
  return dot == std::string::npos ? dotted : dotted.substr(dot + 1);
}

}  // namespace

Environment build_environment(const RunConfig& cfg) {
  const auto& ds = cfg.dataset;
  const int n_devices = cfg.world.num_lans * cfg.world.devices_per_lan;

  Environment env;
  env.workload.model = ModelSpec{cfg.model.kind, ds.num_features, ds.num_classes, cfg.model.hidden_units};
  env.workload.wire_bytes = cfg.model.wire_bytes;

  std::vector<int> sample_counts(static_cast<std::size_t>(n_devices));
  if (ds.accounting_only) {
    const int m = std::max(1, static_cast<int>(std::lround(ds.train_fraction * ds.samples_per_device)));
    std::fill(sample_counts.begin(), sample_counts.end(), m);
  } else {
    SyntheticSpec spec{ds.num_classes, ds.num_features, n_devices * ds.samples_per_device,
                       ds.class_separation, ds.noise};
    const auto samples = make_synthetic(spec, derive_seed(cfg.seed, {kTagData, 0}));
    const auto shards =
        partition_noniid(samples, n_devices, ds.shards_per_device, derive_seed(cfg.seed, {kTagData, 1}));
    for (int d = 0; d < n_devices; ++d) {
      auto [train, test] = train_test_split(shards[static_cast<std::size_t>(d)], ds.train_fraction,
                                            derive_seed(cfg.seed, {kTagSplit, static_cast<std::uint64_t>(d)}));
      sample_counts[static_cast<std::size_t>(d)] = static_cast<int>(train.rows());
      env.workload.train.push_back(std::move(train));
      env.workload.test.push_back(std::move(test));
    }
  }
  env.world = orchestrator::build_world(cfg.world, sample_counts);
  return env;
}

RunLog run_protocol(const RunConfig& cfg, const Environment& env, const orchestrator::RunOptions& options) {
  auto params = cfg.params;
  params.seed = cfg.seed;
  return cfg.protocol == Protocol::kWanFl
             ? orchestrator::run_wan_fl(env.world, env.workload, params, cfg.cost, options)
             : orchestrator::run_lanfl(env.world, env.workload, params, cfg.cost, options);
}

RunSummary summarize(const RunConfig& cfg, const RunLog& log) {
  RunSummary s;
  s.protocol = protocol_name(cfg.protocol);
  s.lan_device_counts = log.lan_device_counts;
  if (log.metrics.empty()) return s;
  const auto& last = log.metrics.back();
  s.cloud_rounds = last.cloud_round;
  s.final_accuracy = last.accuracy;
  s.wan_traffic_gib = last.cumulative_wan_traffic_gib;
  s.wan_traffic_gib_floor = static_cast<std::uint64_t>(std::floor(last.cumulative_wan_traffic_gib));
  s.clock_seconds = last.cumulative_clock_hours * accounting::kSecondsPerHour;
  s.clock_hours = std::round(last.cumulative_clock_hours * 100.0) / 100.0;
  s.cost_usd = last.cumulative_cost;

  std::vector<double> pct;
  for (const auto& m : log.metrics) pct.push_back(100.0 * m.accuracy);
  const auto conv = accounting::converged(pct);
  if (conv.converged) {
    s.convergence_round = conv.round;
    s.converged_accuracy = log.metrics[static_cast<std::size_t>(conv.round - 1)].accuracy;
  }
  return s;
}

std::string metrics_csv(const std::vector<accounting::RoundMetrics>& metrics) {
  std::string out = "cloud_round,clock_hours,wan_traffic_gb,accuracy,cost_usd\n";
  for (const auto& m : metrics) {
    out += fmt::format("{},{:.6f},{:.6f},{:.6f},{:.6f}\n", m.cloud_round, m.cumulative_clock_hours,
                       m.cumulative_wan_traffic_gib, m.accuracy, m.cumulative_cost);
  }
  return out;
}

nlohmann::ordered_json summary_json(const RunConfig& cfg, const RunSummary& s) {
  nlohmann::ordered_json j;
  j["protocol"] = s.protocol;
  j["cloud_rounds"] = s.cloud_rounds;
  j["final_accuracy"] = s.final_accuracy;
  j["wan_traffic_gib"] = s.wan_traffic_gib;
  j["wan_traffic_gib_floor"] = s.wan_traffic_gib_floor;
  j["clock_seconds"] = s.clock_seconds;
  j["clock_hours"] = s.clock_hours;
  j["cost_usd"] = s.cost_usd;
  j["convergence_round"] = s.convergence_round > 0 ? nlohmann::ordered_json(s.convergence_round)
                                                   : nlohmann::ordered_json(nullptr);
  j["converged_accuracy"] = s.convergence_round > 0 ? nlohmann::ordered_json(s.converged_accuracy)
                                                    : nlohmann::ordered_json(nullptr);
  j["lan_device_counts"] = s.lan_device_counts;
  j["config"] = to_json(cfg);
  return j;
}

fs::path resolve_output_dir(const RunConfig& cfg, const std::optional<std::string>& override_dir) {
  fs::path dir = override_dir.value_or(cfg.output_dir);
  if (dir.is_relative()) {
    if (const char* root = std::getenv(kOutputRootEnv); root != nullptr && *root != '\0') {
      dir = fs::path(root) / dir;
    }
  }
  return dir;
}

ExperimentResult run_experiment(const RunConfig& cfg, const fs::path& out_dir) {
  const Environment env = build_environment(cfg);
  ExperimentResult result;
  result.log = run_protocol(cfg, env);
  result.summary = summarize(cfg, result.log);
  result.out_dir = out_dir;

  fs::create_directories(out_dir);
  write_file(out_dir / "config.json", dump_config(cfg));
  write_file(out_dir / "metrics.csv", metrics_csv(result.log.metrics));
  write_file(out_dir / "summary.json", summary_json(cfg, result.summary).dump(2) + "\n");
  return result;
}

std::vector<fs::path> run_sweep(const RunConfig& base, const nlohmann::json& grid, const fs::path& out_root) {
  if (!grid.is_object() || grid.empty()) throw ConfigError("grid: expected a non-empty object");
  std::vector<std::pair<std::string, std::vector<nlohmann::json>>> axes;
  for (const auto& [key, values] : grid.items()) {
    if (!values.is_array() || values.empty()) throw ConfigError("grid." + key + ": expected a non-empty array");
    axes.emplace_back(key, std::vector<nlohmann::json>(values.begin(), values.end()));
  }

  std::size_t total = 1;
  for (const auto& axis : axes) total *= axis.second.size();

  // Validate every variant before running any of them.
  std::vector<std::pair<RunConfig, fs::path>> variants;
  for (std::size_t index = 0; index < total; ++index) {
    nlohmann::json j = nlohmann::json::parse(to_json(base).dump());
    std::string name = fmt::format("{:03d}", index);
    std::size_t rest = index;
    for (auto it = axes.rbegin(); it != axes.rend(); ++it) {
      const auto& [key, values] = *it;
      const auto& value = values[rest % values.size()];
      rest /= values.size();
      const auto ptr = to_pointer(key);
      if (!j.contains(ptr)) throw ConfigError("grid." + key + ": unknown config path");
      j[ptr] = value;
    }
    for (const auto& axis : axes) {
      name += "_" + sanitize(leaf_name(axis.first) + "=" + j[to_pointer(axis.first)].dump());
    }
    const fs::path dir = out_root / name;
    j["output_dir"] = dir.string();
    variants.emplace_back(parse_config(j.dump()), dir);
  }

  std::vector<fs::path> dirs;
  for (const auto& [cfg, dir] : variants) {
    run_experiment(cfg, dir);
    dirs.push_back(dir);
  }
  return dirs;
}

}  // namespace lanfl::harness
