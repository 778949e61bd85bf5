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

#include "lanfl/orchestrator/protocol.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "lanfl/core/train.hpp"
#include "lanfl/net/ring_allreduce.hpp"

namespace lanfl::orchestrator {

namespace {

using accounting::CloudRoundTiming;
using accounting::DeviceRoundTiming;
using accounting::Traffic;

double slowest_training(const World& world, std::span<const DeviceId> devices, int local_epochs) {
  double slowest = 0.0;
  for (const DeviceId d : devices) slowest = std::max(slowest, world.device(d).epoch_compute_time);
  return local_epochs * slowest;
}

double lan_bandwidth(const LanDomain& lan) {
  if (const auto* fixed = std::get_if<net::FixedBl>(&lan.net.mode)) return fixed->mbps;
  double total = 0.0;
  for (const auto& ap : lan.net.aps) total += ap.capacity_mbps;
  return total;
}

std::vector<net::Member> members_of(const World& world, std::span<const DeviceId> devices) {
  std::vector<net::Member> out;
  out.reserve(devices.size());
  for (const DeviceId d : devices) out.push_back({d, world.device(d).ap_id});
  return out;
}

void check_common(const World& world, const Workload& workload, const ProtocolConfig& cfg) {
  world.validate();
  if (cfg.cloud_rounds < 1) throw std::invalid_argument("config: cloud_rounds must be >= 1");
  if (!(cfg.wan_mbps > 0.0)) throw std::invalid_argument("config: wan_mbps must be positive");
  if (cfg.train.local_epochs < 1 || cfg.train.batch_size < 1 || !(cfg.train.learning_rate >= 0.0)) {
    throw std::invalid_argument("config: invalid train settings");
  }
  if (!workload.accounting_only() &&
      (static_cast<int>(workload.train.size()) != world.device_count())) {
    throw std::invalid_argument("workload: need one training shard per device");
  }
}

}  // namespace

double estimate_device_round_time(const World& world, const LanDomain& lan, int n, int local_epochs,
                                  std::uint64_t model_bytes) {
  if (n < 2 || n > lan.device_count()) {
    throw std::invalid_argument("estimate_device_round_time: n outside [2, NC]");
  }
  const std::span<const DeviceId> first(lan.devices.data(), static_cast<std::size_t>(n));
  const auto members = members_of(world, first);
  const auto topo = net::build_and_select_topology(lan.net, members, model_bytes);
  return slowest_training(world, lan.devices, local_epochs) + topo.comm_time_s;
}

std::vector<int> balance_device_counts(const World& world, int base_nc_s, int local_epochs,
                                       std::uint64_t model_bytes) {
  if (base_nc_s < 2) throw std::invalid_argument("balance_device_counts: base_nc_s must be >= 2");
  for (const auto& lan : world.lans) {
    if (lan.device_count() < 2) throw std::invalid_argument("balance_device_counts: LAN with < 2 devices");
  }

  std::vector<int> by_bandwidth(world.lans.size());
  std::iota(by_bandwidth.begin(), by_bandwidth.end(), 0);
  std::stable_sort(by_bandwidth.begin(), by_bandwidth.end(), [&](int a, int b) {
    return lan_bandwidth(world.lan(a)) < lan_bandwidth(world.lan(b));
  });
  const LanDomain& median = world.lan(by_bandwidth[(by_bandwidth.size() - 1) / 2]);
  const double reference = estimate_device_round_time(
      world, median, std::clamp(base_nc_s, 2, median.device_count()), local_epochs, model_bytes);

  std::vector<int> counts;
  counts.reserve(world.lans.size());
  for (const auto& lan : world.lans) {
    if (std::holds_alternative<net::FixedBl>(lan.net.mode)) {
      counts.push_back(std::clamp(base_nc_s, 2, lan.device_count()));
      continue;
    }
    int best = 2;
    double best_gap = std::abs(estimate_device_round_time(world, lan, 2, local_epochs, model_bytes) - reference);
    for (int n = 3; n <= lan.device_count(); ++n) {
      const double gap =
          std::abs(estimate_device_round_time(world, lan, n, local_epochs, model_bytes) - reference);
      if (gap <= best_gap) {
        best = n;
        best_gap = gap;
      }
    }
    counts.push_back(best);
  }
  return counts;
}

LanOutcome lan_orchestrate(const World& world, const Workload& workload, const LanDomain& lan,
                           const Weights& global, const ProtocolConfig& cfg, int devices_per_round,
                           int cloud_round, const RunOptions& options) {
  if (lan.device_count() < 2) {
    throw std::invalid_argument("lan_orchestrate: LAN " + std::to_string(lan.lan_id) +
                                " has fewer than 2 devices");
  }
  if (cfg.device_rounds < 1) throw std::invalid_argument("lan_orchestrate: device_rounds must be >= 1");
  if (devices_per_round < 2 || devices_per_round > lan.device_count()) {
    throw std::invalid_argument("lan_orchestrate: devices per round outside [2, NC]");
  }

  const auto model_bytes = global.byte_size;
  const bool weighted = cfg.train.weighted_aggregation;
  LanOutcome out;
  out.weights = global;
  out.log.lan = lan.lan_id;

  for (int j = 0; j < cfg.device_rounds; ++j) {
    DeviceRoundLog round;
    round.selected = select_uniform<DeviceId>(
        lan.devices, devices_per_round,
        derive_seed(cfg.seed, {kTagDeviceSelect, static_cast<std::uint64_t>(cloud_round),
                               static_cast<std::uint64_t>(j), static_cast<std::uint64_t>(lan.lan_id)}));
    const auto members = members_of(world, round.selected);
    round.topology = net::build_and_select_topology(lan.net, members, model_bytes);

    // Updates in topology order: CT order for PS, ring order for Ring.
    const auto& order =
        round.topology.kind == net::TopologyKind::kRing ? round.topology.order : round.selected;
    std::vector<Weights> trained;
    std::vector<double> weights;
    trained.reserve(order.size());
    for (const DeviceId d : order) {
      const auto seed = derive_seed(cfg.seed, {kTagTrain, static_cast<std::uint64_t>(cloud_round),
                                               static_cast<std::uint64_t>(j), static_cast<std::uint64_t>(d)});
      trained.push_back(workload.train_device(d, out.weights, cfg.train, seed));
      const double samples = world.device(d).sample_count;
      weights.push_back(weighted ? samples : 1.0);
      if (options.record_device_models) out.device_models.push_back({d, j, samples, trained.back()});
    }

    const std::span<const Weights> updates(trained);
    const std::span<const double> w(weights);
    out.weights = round.topology.kind == net::TopologyKind::kRing ? net::ring_allreduce(updates, w)
                                                                  : aggregate(updates, w);

    round.train_s = slowest_training(world, round.selected, cfg.train.local_epochs);
    round.comm_lan_s = round.topology.comm_time_s;
    out.elapsed_s += round.train_s + round.comm_lan_s;
    if (j + 1 == cfg.device_rounds) {
      double total = 0.0;
      for (const DeviceId d : round.selected) total += world.device(d).sample_count;
      if (cfg.cloud_weighting == CloudWeighting::kLanTotal) total = static_cast<double>(lan.sample_total);
      out.cloud_weight = weighted ? total : 1.0;
    }
    out.log.device_rounds.push_back(std::move(round));
  }
  out.log.elapsed_s = out.elapsed_s;
  out.log.cloud_weight = out.cloud_weight;
  return out;
}

RunLog run_wan_fl(const World& world, const Workload& workload, const ProtocolConfig& cfg,
                  const accounting::CostModel& cost, const RunOptions& options) {
  check_common(world, workload, cfg);
  if (cfg.devices_per_round < 1 || cfg.devices_per_round > world.device_count()) {
    throw std::invalid_argument("config: devices_per_round must be in [1, N]");
  }

  std::vector<DeviceId> pool(static_cast<std::size_t>(world.device_count()));
  std::iota(pool.begin(), pool.end(), 0);

  RunLog log;
  log.model_bytes = workload.model_bytes();
  Weights global = workload.initial_weights(derive_seed(cfg.seed, {kTagInit}));
  accounting::MetricsAccumulator metrics(cost);
  const double wan_one_way = net::wan_transfer_time(log.model_bytes, cfg.wan_mbps);

  for (int t = 0; t < cfg.cloud_rounds; ++t) {
    CloudRoundLog round;
    round.round = t + 1;
    // Same stream as device round 0 of LAN 0 in LanFL, so a one-LAN LanFL run
    // makes identical selections.
    round.selected = select_uniform<DeviceId>(
        pool, cfg.devices_per_round,
        derive_seed(cfg.seed, {kTagDeviceSelect, static_cast<std::uint64_t>(t), 0, 0}));

    std::vector<Weights> trained;
    std::vector<double> weights;
    for (const DeviceId d : round.selected) {
      const auto seed = derive_seed(cfg.seed, {kTagTrain, static_cast<std::uint64_t>(t), 0,
                                               static_cast<std::uint64_t>(d)});
      trained.push_back(workload.train_device(d, global, cfg.train, seed));
      const double samples = world.device(d).sample_count;
      weights.push_back(cfg.train.weighted_aggregation ? samples : 1.0);
      if (options.record_device_models) round.device_models.push_back({d, 0, samples, trained.back()});
    }
    global = aggregate(std::span<const Weights>(trained), std::span<const double>(weights));

    round.timing.comm_wan_s = 2.0 * wan_one_way;
    round.timing.device_rounds.push_back(
        {slowest_training(world, round.selected, cfg.train.local_epochs), 0.0});
    const auto per_round = accounting::wan_traffic_wanfl(1, round.selected.size(), log.model_bytes);
    log.metrics.push_back(metrics.add_round(round.timing, per_round, per_round, workload.evaluate(global)));
    if (options.record_trajectory) log.trajectory.push_back(global);
    log.rounds.push_back(std::move(round));
  }
  log.final_weights = std::move(global);
  return log;
}

RunLog run_lanfl(const World& world, const Workload& workload, const ProtocolConfig& cfg,
                 const accounting::CostModel& cost, const RunOptions& options) {
  check_common(world, workload, cfg);
  if (cfg.device_rounds < 1) throw std::invalid_argument("config: device_rounds must be >= 1");
  if (cfg.lans_per_round < 1 || cfg.lans_per_round > world.lan_count()) {
    throw std::invalid_argument("config: lans_per_round must be in [1, NL]");
  }
  if (cfg.lan_devices_per_round < 2) {
    throw std::invalid_argument("config: lan_devices_per_round must be >= 2");
  }

  RunLog log;
  log.model_bytes = workload.model_bytes();
  if (cfg.heterogeneity_balancing) {
    log.lan_device_counts = balance_device_counts(world, cfg.lan_devices_per_round,
                                                  cfg.train.local_epochs, log.model_bytes);
  } else {
    if (cfg.lan_devices_per_round > world.min_lan_size()) {
      throw std::invalid_argument("config: lan_devices_per_round exceeds the smallest LAN");
    }
    log.lan_device_counts.assign(world.lans.size(), cfg.lan_devices_per_round);
  }

  std::vector<LanId> lan_ids(world.lans.size());
  std::iota(lan_ids.begin(), lan_ids.end(), 0);

  Weights global = workload.initial_weights(derive_seed(cfg.seed, {kTagInit}));
  accounting::MetricsAccumulator metrics(cost);
  const double wan_one_way = net::wan_transfer_time(log.model_bytes, cfg.wan_mbps);

  for (int k = 0; k < cfg.cloud_rounds; ++k) {
    CloudRoundLog round;
    round.round = k + 1;
    round.selected = select_uniform<LanId>(
        lan_ids, cfg.lans_per_round, derive_seed(cfg.seed, {kTagLanSelect, static_cast<std::uint64_t>(k)}));

    std::vector<Weights> lan_models;
    std::vector<double> lan_weights;
    const LanRoundLog* critical = nullptr;
    for (const LanId id : round.selected) {
      const auto& lan = world.lan(id);
      auto outcome = lan_orchestrate(world, workload, lan, global, cfg,
                                     log.lan_device_counts[static_cast<std::size_t>(id)], k, options);
      lan_models.push_back(std::move(outcome.weights));
      lan_weights.push_back(outcome.cloud_weight);
      for (auto& m : outcome.device_models) round.device_models.push_back(std::move(m));
      round.lans.push_back(std::move(outcome.log));
    }
    for (const auto& l : round.lans) {
      if (critical == nullptr || l.elapsed_s > critical->elapsed_s) critical = &l;
    }
    global = aggregate(std::span<const Weights>(lan_models), std::span<const double>(lan_weights));

    round.timing.comm_wan_s = 2.0 * wan_one_way;
    for (const auto& dr : critical->device_rounds) {
      round.timing.device_rounds.push_back({dr.train_s, dr.comm_lan_s});
    }
    const auto per_round = accounting::wan_traffic_lanfl(1, round.selected.size(), log.model_bytes);
    log.metrics.push_back(metrics.add_round(round.timing, per_round, per_round, workload.evaluate(global)));
    if (options.record_trajectory) log.trajectory.push_back(global);
    log.rounds.push_back(std::move(round));
  }
  log.final_weights = std::move(global);
  return log;
}

}  // namespace lanfl::orchestrator
