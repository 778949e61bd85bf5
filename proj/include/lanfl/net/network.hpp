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
#include <limits>
#include <span>
#include <variant>
#include <vector>

#include "lanfl/core/types.hpp"

namespace lanfl::net {

inline constexpr double kUnlimited = std::numeric_limits<double>::infinity();

/// A wireless access point. `capacity_mbps` is the air capacity shared by
/// every flow that touches the AP; `backhaul_mbps` is the wired uplink shared
/// separately by flows entering and by flows leaving the AP from other APs.
struct AccessPoint {
  ApId ap_id = 0;
  double capacity_mbps = 170.0;
  double backhaul_mbps = kUnlimited;
};

/// Every flow gets the same throughput regardless of load.
struct FixedBl {
  double mbps = 20.0;
};
/// Flows share AP capacity (see estimate_flow_throughput).
struct CapacityModel {};

using BandwidthMode = std::variant<FixedBl, CapacityModel>;

struct LanDomainNet {
  LanId lan_id = 0;
  std::vector<AccessPoint> aps;
  BandwidthMode mode = CapacityModel{};

  const AccessPoint& ap(ApId id) const;
  bool has_ap(ApId id) const;
};

struct Flow {
  ApId src_ap = 0;
  ApId dst_ap = 0;
};

/// Per-flow throughput for a set of concurrent flows.
///
/// Capacity model: a flow touches its source AP and, if different, its
/// destination AP. At each AP the air capacity is split evenly across the
/// flows touching it; cross-AP flows additionally split the source AP's
/// backhaul egress and the destination AP's backhaul ingress. A flow runs at
/// the minimum of those shares. Fixed mode returns BL for every flow.
std::vector<double> estimate_flow_throughput(const LanDomainNet& lan, std::span<const Flow> flows);

/// Megabits in a model of `model_bytes` bytes (1 Mb = 1e6 bits).
inline double megabits(std::uint64_t model_bytes) {
  return 8.0 * static_cast<double>(model_bytes) / 1e6;
}

/// Parameter-server aggregation: upload to the aggregator then broadcast back,
/// 2 * |w| / BL.
double comm_time_ps(std::uint64_t model_bytes, double bl_ps_mbps);

/// Ring all-reduce over half-duplex links, 4 (n - 1) / n * |w| / BL.
double comm_time_ring(std::uint64_t model_bytes, double bl_ring_mbps, int nc_s);

/// One-way transfer of the model across the WAN, |w| / BW.
double wan_transfer_time(std::uint64_t model_bytes, double bw_mbps);

struct Member {
  DeviceId device = 0;
  ApId ap = 0;
};

enum class TopologyKind { kPs, kRing };

struct Link {
  DeviceId from = 0;
  DeviceId to = 0;
};

/// Intra-LAN collective graph. For PS, `order` lists the members and every
/// non-aggregator has one link to `aggregator`. For Ring, `order` is the cyclic
/// order and each member links to its successor.
struct Topology {
  TopologyKind kind = TopologyKind::kPs;
  DeviceId aggregator = -1;
  std::vector<DeviceId> order;
  std::vector<Link> links;
  std::vector<double> link_throughput_mbps;  // aligned with `links`
  double bottleneck_mbps = 0.0;
  double comm_time_s = 0.0;
};

/// All candidates in evaluation order: one PS per distinct AP (aggregator is
/// the lowest-id member on that AP, sorted by aggregator id), then the
/// AP-grouped ring.
std::vector<Topology> candidate_topologies(const LanDomainNet& lan, std::span<const Member> members,
                                           std::uint64_t model_bytes);

/// Candidate with the smallest com_T_L; the first candidate wins ties, which
/// puts PS before Ring and lower aggregator ids first.
Topology build_and_select_topology(const LanDomainNet& lan, std::span<const Member> members,
                                   std::uint64_t model_bytes);

}  // namespace lanfl::net
