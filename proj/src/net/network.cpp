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

#include "lanfl/net/network.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>

namespace lanfl::net {

const AccessPoint& LanDomainNet::ap(ApId id) const {
  for (const auto& a : aps) {
    if (a.ap_id == id) return a;
  }
  throw std::invalid_argument("unknown AP id " + std::to_string(id) + " in LAN " +
                              std::to_string(lan_id));
}

bool LanDomainNet::has_ap(ApId id) const {
  return std::any_of(aps.begin(), aps.end(), [id](const auto& a) { return a.ap_id == id; });
}

std::vector<double> estimate_flow_throughput(const LanDomainNet& lan, std::span<const Flow> flows) {
  for (const auto& f : flows) {
    static_cast<void>(lan.ap(f.src_ap));
    static_cast<void>(lan.ap(f.dst_ap));
  }
  if (const auto* fixed = std::get_if<FixedBl>(&lan.mode)) {
    return std::vector<double>(flows.size(), fixed->mbps);
  }

  std::map<ApId, int> air, egress, ingress;
  for (const auto& f : flows) {
    ++air[f.src_ap];
    if (f.dst_ap != f.src_ap) {
      ++air[f.dst_ap];
      ++egress[f.src_ap];
      ++ingress[f.dst_ap];
    }
  }

  std::vector<double> out;
  out.reserve(flows.size());
  for (const auto& f : flows) {
    const auto& src = lan.ap(f.src_ap);
    double rate = src.capacity_mbps / air[f.src_ap];
    if (f.dst_ap != f.src_ap) {
      const auto& dst = lan.ap(f.dst_ap);
      rate = std::min({rate, dst.capacity_mbps / air[f.dst_ap],
                       src.backhaul_mbps / egress[f.src_ap], dst.backhaul_mbps / ingress[f.dst_ap]});
    }
    out.push_back(rate);
  }
  return out;
}

double comm_time_ps(std::uint64_t model_bytes, double bl_ps_mbps) {
  if (!(bl_ps_mbps > 0.0)) throw std::invalid_argument("comm_time_ps: BL must be positive");
  return 2.0 * megabits(model_bytes) / bl_ps_mbps;
}

double comm_time_ring(std::uint64_t model_bytes, double bl_ring_mbps, int nc_s) {
  if (nc_s < 2) throw std::invalid_argument("comm_time_ring: ring needs at least 2 members");
  if (!(bl_ring_mbps > 0.0)) throw std::invalid_argument("comm_time_ring: BL must be positive");
  const double n = nc_s;
  return 4.0 * (n - 1.0) / n * megabits(model_bytes) / bl_ring_mbps;
}

double wan_transfer_time(std::uint64_t model_bytes, double bw_mbps) {
  if (!(bw_mbps > 0.0)) throw std::invalid_argument("wan_transfer_time: BW must be positive");
  return megabits(model_bytes) / bw_mbps;
}

namespace {

void price(const LanDomainNet& lan, const std::map<DeviceId, ApId>& ap_of, std::uint64_t model_bytes,
           Topology& t) {
  std::vector<Flow> flows;
  flows.reserve(t.links.size());
  for (const auto& l : t.links) flows.push_back({ap_of.at(l.from), ap_of.at(l.to)});
  t.link_throughput_mbps = estimate_flow_throughput(lan, flows);
  t.bottleneck_mbps = *std::min_element(t.link_throughput_mbps.begin(), t.link_throughput_mbps.end());
  t.comm_time_s = t.kind == TopologyKind::kPs
                      ? comm_time_ps(model_bytes, t.bottleneck_mbps)
                      : comm_time_ring(model_bytes, t.bottleneck_mbps, static_cast<int>(t.order.size()));
}

}  // namespace

std::vector<Topology> candidate_topologies(const LanDomainNet& lan, std::span<const Member> members,
                                           std::uint64_t model_bytes) {
  if (members.size() < 2) {
    throw std::invalid_argument("build_and_select_topology: need at least 2 members");
  }
  std::map<DeviceId, ApId> ap_of;
  for (const auto& m : members) {
    static_cast<void>(lan.ap(m.ap));  // unknown AP throws
    if (!ap_of.emplace(m.device, m.ap).second) {
      throw std::invalid_argument("build_and_select_topology: duplicate member");
    }
  }

  // Members grouped AP-by-AP, ids ascending inside each AP.
  std::vector<Member> grouped(members.begin(), members.end());
  std::sort(grouped.begin(), grouped.end(), [](const Member& a, const Member& b) {
    return a.ap != b.ap ? a.ap < b.ap : a.device < b.device;
  });
  std::vector<DeviceId> ids;
  for (const auto& m : grouped) ids.push_back(m.device);
  std::vector<DeviceId> sorted_ids = ids;
  std::sort(sorted_ids.begin(), sorted_ids.end());

  std::vector<DeviceId> aggregators;
  for (std::size_t i = 0; i < grouped.size(); ++i) {
    if (i == 0 || grouped[i].ap != grouped[i - 1].ap) aggregators.push_back(grouped[i].device);
  }
  std::sort(aggregators.begin(), aggregators.end());

  std::vector<Topology> out;
  for (const DeviceId agg : aggregators) {
    Topology ps;
    ps.kind = TopologyKind::kPs;
    ps.aggregator = agg;
    ps.order = sorted_ids;
    for (const DeviceId d : sorted_ids) {
      if (d != agg) ps.links.push_back({d, agg});
    }
    price(lan, ap_of, model_bytes, ps);
    out.push_back(std::move(ps));
  }

  Topology ring;
  ring.kind = TopologyKind::kRing;
  ring.order = ids;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    ring.links.push_back({ids[i], ids[(i + 1) % ids.size()]});
  }
  price(lan, ap_of, model_bytes, ring);
  out.push_back(std::move(ring));
  return out;
}

Topology build_and_select_topology(const LanDomainNet& lan, std::span<const Member> members,
                                   std::uint64_t model_bytes) {
  auto candidates = candidate_topologies(lan, members, model_bytes);
  std::size_t best = 0;
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    if (candidates[i].comm_time_s < candidates[best].comm_time_s) best = i;
  }
  return std::move(candidates[best]);
}

}  // namespace lanfl::net
