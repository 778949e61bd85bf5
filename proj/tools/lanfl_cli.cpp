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

// Command-line driver: run, sweep, compare, validate-config.
//
// Exit codes: 0 success, 1 config error, 2 runtime failure or divergence.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lanfl/harness/compare.hpp"
#include "lanfl/harness/config.hpp"
#include "lanfl/harness/experiment.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

using namespace lanfl::harness;

nlohmann::json load_grid(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read grid file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return nlohmann::json::parse(buf.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("grid " + path + ": " + e.what());
  }
}

void print_summary(const ExperimentResult& r) {
  const auto& s = r.summary;
  std::cout << s.protocol << ": " << s.cloud_rounds << " cloud rounds, accuracy " << s.final_accuracy
            << ", WAN traffic " << s.wan_traffic_gib << " GiB, clock " << s.clock_hours << " h, cost $"
            << s.cost_usd << "\n"
            << "output: " << r.out_dir.string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hierarchical LAN/WAN federated learning simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  auto* run = app.add_subcommand("run", "Run one experiment");
  run->add_option("--config", config_path, "JSON config")->required();
  run->add_option("--seed", seed, "Override the config seed");
  run->add_option("--out", out_dir, "Output directory");

  std::string grid_path;
  auto* sweep = app.add_subcommand("sweep", "Run the cartesian product of a parameter grid");
  sweep->add_option("--config", config_path, "Base JSON config")->required();
  sweep->add_option("--grid", grid_path, "JSON object of dotted path -> value list")->required();
  sweep->add_option("--out", out_dir, "Output root");

  double target_acc = 0.0;
  std::vector<std::string> dirs;
  auto* compare = app.add_subcommand("compare", "Compare run directories at a target accuracy");
  compare->add_option("--target-acc", target_acc, "Target accuracy, fraction or percent")->required();
  compare->add_option("dirs", dirs, "Run directories; the first is the baseline")->required()->expected(2, -1);

  auto* validate = app.add_subcommand("validate-config", "Parse and validate a config");
  validate->add_option("--config", config_path, "JSON config")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (validate->parsed()) {
      const auto cfg = load_config(config_path);
      std::cout << "ok: " << protocol_name(cfg.protocol) << " config\n";
    } else if (run->parsed()) {
      auto cfg = load_config(config_path);
      if (seed) cfg.seed = cfg.params.seed = *seed;
      const auto dir = resolve_output_dir(cfg, out_dir);
      print_summary(run_experiment(cfg, dir));
    } else if (sweep->parsed()) {
      const auto cfg = load_config(config_path);
      const auto grid = load_grid(grid_path);
      for (const auto& d : run_sweep(cfg, grid, resolve_output_dir(cfg, out_dir))) {
        std::cout << d.string() << "\n";
      }
    } else if (compare->parsed()) {
      const double target = target_acc > 1.0 ? target_acc / 100.0 : target_acc;
      std::vector<MetricsSeries> series;
      for (const auto& d : dirs) series.push_back(load_run_dir(d));
      const auto rows = compare_runs(series, target);
      std::cout << format_comparison(rows, target);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}
