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

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

#include "lanfl/accounting/metrics.hpp"
#include "lanfl/core/data.hpp"
#include "lanfl/core/model.hpp"
#include "lanfl/orchestrator/protocol.hpp"
#include "lanfl/orchestrator/world.hpp"

namespace lanfl::harness {

/// Malformed or invalid configuration. The message names the offending field
/// (dotted path) or, for syntax errors, the line and column.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Protocol { kWanFl, kLanFl };

struct DatasetConfig {
  bool accounting_only = false;
  int num_classes = 10;
  int num_features = 20;
  int samples_per_device = 100;
  int shards_per_device = 2;
  double class_separation = 1.0;
  double noise = 1.0;
  double train_fraction = 0.8;

  bool operator==(const DatasetConfig&) const = default;
};

struct ModelConfig {
  ModelKind kind = ModelKind::kLogistic;
  int hidden_units = 16;
  std::uint64_t wire_bytes = 0;  // 0: parameter count * 4 bytes

  bool operator==(const ModelConfig&) const = default;
};

struct RunConfig {
  Protocol protocol = Protocol::kLanFl;
  std::uint64_t seed = 0;
  std::string output_dir = "runs/default";
  orchestrator::WorldSpec world;
  orchestrator::ProtocolConfig params;  // params.seed mirrors `seed`
  ModelConfig model;
  DatasetConfig dataset;
  accounting::CostModel cost;

  bool operator==(const RunConfig&) const = default;
};

/// Parses and validates a JSON config, applying defaults. Whitespace-only text
/// is treated as an empty object.
RunConfig parse_config(std::string_view text);

RunConfig load_config(const std::filesystem::path& path);

/// Full config with every default spelled out; parse_config(dump) round-trips.
nlohmann::ordered_json to_json(const RunConfig& cfg);
std::string dump_config(const RunConfig& cfg);

std::string protocol_name(Protocol p);

}  // namespace lanfl::harness
