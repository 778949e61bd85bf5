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

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "lanfl/accounting/metrics.hpp"
#include "lanfl/core/rng.hpp"
#include "lanfl/net/network.hpp"
#include "lanfl/orchestrator/world.hpp"

namespace lanfl::orchestrator {

// Cloud-side weight of a returned LAN model under sample weighting.
// kParticipants: samples held by the last device round's CT, so RL=1 matches
// flat FedAvg over the same devices. kLanTotal: the LAN's full sample total l_i,
// independent of how many devices participate.
enum class CloudWeighting { kParticipants, kLanTotal };

struct ProtocolConfig {
  int cloud_rounds = 1;           // RW
  int device_rounds = 1;          // RL
  int lans_per_round = 5;         // NL_s
  int lan_devices_per_round = 10; // NC_s
  int devices_per_round = 50;     // N_s (WAN-FL)
  double wan_mbps = 2.0;          // BW
  TrainConfig train;
  bool heterogeneity_balancing = false;
  CloudWeighting cloud_weighting = CloudWeighting::kParticipants;
  std::uint64_t seed = 0;

  bool operator==(const ProtocolConfig&) const = default;
};

struct RunOptions {
  bool record_trajectory = false;     // global weights after every cloud round
  bool record_device_models = false;  // every locally trained model
};

struct DeviceRoundLog {
  std::vector<DeviceId> selected;  // CT
  net::Topology topology;
  double train_s = 0.0;
  double comm_lan_s = 0.0;
};

struct LanRoundLog {
  LanId lan = 0;
  std::vector<DeviceRoundLog> device_rounds;
  double elapsed_s = 0.0;
  double cloud_weight = 0.0;
};

struct DeviceModel {
  DeviceId device = 0;
  int device_round = 0;
  double sample_count = 0.0;
  Weights weights;
};

struct CloudRoundLog {
  int round = 0;                           // 1-based
  std::vector<int> selected;               // LAN ids (LanFL) or device ids (WAN-FL)
  std::vector<LanRoundLog> lans;           // LanFL only, ascending LAN id
  accounting::CloudRoundTiming timing;     // critical path
  std::vector<DeviceModel> device_models;  // with RunOptions::record_device_models
};

struct RunLog {
  std::vector<accounting::RoundMetrics> metrics;
  std::vector<CloudRoundLog> rounds;
  std::vector<int> lan_device_counts;  // per-LAN NC_s actually used (LanFL)
  std::vector<Weights> trajectory;
  Weights final_weights;
  std::uint64_t model_bytes = 0;
};

/// Uniform sample of k distinct elements, returned in pool order. Rejects
/// k < 1 and k > pool size.
template <typename T>
std::vector<T> select_uniform(std::span<const T> pool, int k, std::uint64_t seed) {
  if (k < 1) throw std::invalid_argument("select_uniform: k must be >= 1");
  if (static_cast<std::size_t>(k) > pool.size()) {
    throw std::invalid_argument("select_uniform: k exceeds pool size");
  }
  Rng rng(seed);
  std::vector<std::size_t> idx(pool.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  // Partial Fisher-Yates: the first k slots end up a uniform k-subset.
  for (std::size_t i = 0; i < static_cast<std::size_t>(k); ++i) {
    const auto j = i + uniform_index(rng, idx.size() - i);
    std::swap(idx[i], idx[j]);
  }
  idx.resize(static_cast<std::size_t>(k));
  std::sort(idx.begin(), idx.end());
  std::vector<T> out;
  out.reserve(idx.size());
  for (const auto i : idx) out.push_back(pool[i]);
  return out;
}

/// Estimated duration of one device round in `lan` with its first n devices:
/// E * slowest epoch time + com_T_L of the topology that would be selected.
double estimate_device_round_time(const World& world, const LanDomain& lan, int n, int local_epochs,
                                  std::uint64_t model_bytes);

/// Per-LAN participant counts that equalise device-round pace. The reference
/// pace is T(base_nc_s) of the median-bandwidth LAN; each LAN gets the n in
/// [2, NC] minimising |T(n) - T_ref|, ties toward larger n. Fixed-BL LANs
/// have a flat T(n) and keep base_nc_s.
std::vector<int> balance_device_counts(const World& world, int base_nc_s, int local_epochs,
                                       std::uint64_t model_bytes);

struct LanOutcome {
  Weights weights;
  double cloud_weight = 0.0;  // sample total of the final device round's CT, or 1
  double elapsed_s = 0.0;
  LanRoundLog log;
  std::vector<DeviceModel> device_models;
};

/// RL device rounds inside one LAN, starting from the global model.
LanOutcome lan_orchestrate(const World& world, const Workload& workload, const LanDomain& lan,
                           const Weights& global, const ProtocolConfig& cfg, int devices_per_round,
                           int cloud_round, const RunOptions& options = {});

/// FedAvg over the WAN.
RunLog run_wan_fl(const World& world, const Workload& workload, const ProtocolConfig& cfg,
                  const accounting::CostModel& cost = {}, const RunOptions& options = {});

/// Hierarchical LAN/WAN protocol.
RunLog run_lanfl(const World& world, const Workload& workload, const ProtocolConfig& cfg,
                 const accounting::CostModel& cost = {}, const RunOptions& options = {});

}  // namespace lanfl::orchestrator
