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
#include <span>
#include <vector>

#include "lanfl/core/model.hpp"
#include "lanfl/core/types.hpp"
#include "lanfl/net/network.hpp"

namespace lanfl::orchestrator {

using Weights = ModelWeights<double>;

struct LanDomain {
  LanId lan_id = 0;
  std::vector<DeviceId> devices;  // CG, ascending ids
  std::int64_t sample_total = 0;  // l_i
  net::LanDomainNet net;

  int device_count() const { return static_cast<int>(devices.size()); }  // NC
};

/// Static device population. Device ids are 0..N-1 and index `devices`;
/// LAN ids are 0..NL-1 and index `lans`.
struct World {
  std::vector<DeviceProfile> devices;
  std::vector<LanDomain> lans;

  int device_count() const { return static_cast<int>(devices.size()); }
  int lan_count() const { return static_cast<int>(lans.size()); }
  const DeviceProfile& device(DeviceId id) const { return devices.at(static_cast<std::size_t>(id)); }
  const LanDomain& lan(LanId id) const { return lans.at(static_cast<std::size_t>(id)); }
  int min_lan_size() const;

  /// Throws std::invalid_argument when ids, memberships, AP references or
  /// sample totals disagree.
  void validate() const;
};

/// Regular world layout: devices of a LAN are dealt round-robin onto its APs.
/// Per-LAN lists may hold one entry (applied to every LAN) or one per LAN.
struct WorldSpec {
  int num_lans = 20;
  int devices_per_lan = 10;
  int aps_per_lan = 1;
  bool fixed_bl = false;
  std::vector<double> lan_bandwidth_mbps{20.0};  // BL, fixed_bl mode
  std::vector<double> ap_capacity_mbps{170.0};   // per-AP air capacity, capacity mode
  double ap_backhaul_mbps = 96.0;                // <= 0 means unlimited
  double epoch_compute_time_s = 10.0;

  bool operator==(const WorldSpec&) const = default;
};

/// `sample_counts[d]` is device d's training-sample count (m_k).
World build_world(const WorldSpec& spec, std::span<const int> sample_counts);

/// What the devices train. With no shards the run is accounting-only: local
/// training returns its input, accuracy reads 0, and only timing and traffic
/// are modelled.
struct Workload {
  ModelSpec model;
  std::vector<DatasetShard<double>> train;  // indexed by device id
  std::vector<DatasetShard<double>> test;
  std::uint64_t wire_bytes = 0;  // |w| override; 0 uses the parameter count

  bool accounting_only() const { return train.empty(); }
  std::uint64_t model_bytes() const;
  Weights initial_weights(std::uint64_t seed) const;
  Weights train_device(DeviceId device, const Weights& start, const TrainConfig& cfg,
                       std::uint64_t seed) const;
  double evaluate(const Weights& w) const;
};

}  // namespace lanfl::orchestrator
