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

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "lanfl/core/train.hpp"
#include "lanfl/harness/experiment.hpp"
#include "lanfl/orchestrator/protocol.hpp"

namespace lanfl::orchestrator {
namespace {

using harness::RunConfig;

constexpr std::uint64_t k25MiB = 25ull << 20;

RunConfig small_config(int num_lans, int devices_per_lan, std::uint64_t seed = 3) {
  RunConfig cfg;
  cfg.seed = seed;
  cfg.world.num_lans = num_lans;
  cfg.world.devices_per_lan = devices_per_lan;
  cfg.world.fixed_bl = true;
  cfg.dataset.num_classes = 4;
  cfg.dataset.num_features = 6;
  cfg.dataset.samples_per_device = 20;
  cfg.dataset.shards_per_device = 2;
  cfg.params.cloud_rounds = 3;
  cfg.params.seed = seed;
  cfg.params.train = TrainConfig{2, 5, 0.1, true};
  return cfg;
}

World accounting_world(const std::vector<double>& capacities, int devices_per_lan, bool fixed = false) {
  WorldSpec spec;
  spec.num_lans = static_cast<int>(capacities.size());
  spec.devices_per_lan = devices_per_lan;
  spec.fixed_bl = fixed;
  spec.ap_capacity_mbps = capacities;
  spec.lan_bandwidth_mbps = capacities;
  spec.ap_backhaul_mbps = 0.0;
  const std::vector<int> samples(static_cast<std::size_t>(spec.num_lans * devices_per_lan), 10);
  return build_world(spec, samples);
}

TEST(SelectUniform, WholePoolAndBounds) {
  const std::vector<int> pool{4, 8, 15, 16, 23, 42};
  EXPECT_EQ(select_uniform<int>(pool, 6, 1), pool);
  EXPECT_THROW(select_uniform<int>(pool, 0, 1), std::invalid_argument);
  EXPECT_THROW(select_uniform<int>(pool, 7, 1), std::invalid_argument);
  EXPECT_EQ(select_uniform<int>(pool, 3, 9), select_uniform<int>(pool, 3, 9));
}

TEST(SelectUniform, DistinctAndInPoolOrder) {
  std::vector<int> pool(30);
  std::iota(pool.begin(), pool.end(), 100);
  for (std::uint64_t s = 0; s < 100; ++s) {
    const auto pick = select_uniform<int>(pool, 7, s);
    EXPECT_TRUE(std::is_sorted(pick.begin(), pick.end()));
    EXPECT_EQ(std::set<int>(pick.begin(), pick.end()).size(), 7u);
  }
}

TEST(SelectUniform, InclusionFrequency) {
  std::vector<int> pool(20);
  std::iota(pool.begin(), pool.end(), 0);
  std::vector<int> hits(20, 0);
  for (std::uint64_t draw = 0; draw < 10000; ++draw) {
    for (int x : select_uniform<int>(pool, 5, derive_seed(77, {draw}))) ++hits[static_cast<std::size_t>(x)];
  }
  double chi2 = 0.0;
  for (int h : hits) {
    EXPECT_NEAR(h, 2500, 150);
    chi2 += (h - 2500.0) * (h - 2500.0) / 2500.0;
  }
  EXPECT_LT(chi2, 43.8);  // 99.9th percentile of chi-square with 19 dof
}

TEST(Balance, HomogeneousKeepsBase) {
  const auto world = accounting_world(std::vector<double>(6, 170.0), 12);
  for (int base : {2, 5, 10, 12}) {
    const auto counts = balance_device_counts(world, base, 2, k25MiB);
    for (int c : counts) EXPECT_EQ(c, base);
  }
}

TEST(Balance, FixedBandwidthKeepsBase) {
  const auto world = accounting_world({5, 20, 40}, 10, true);
  for (int c : balance_device_counts(world, 6, 2, k25MiB)) EXPECT_EQ(c, 6);
}

TEST(Balance, OrderedByBandwidth) {
  const auto world = accounting_world({45, 180, 180, 360, 360}, 20);
  const auto counts = balance_device_counts(world, 10, 2, k25MiB);
  ASSERT_EQ(counts.size(), 5u);
  EXPECT_TRUE(std::is_sorted(counts.begin(), counts.end()));
  EXPECT_LT(counts[0], counts[1]);
  EXPECT_EQ(counts[1], 10);
  EXPECT_EQ(counts[1], counts[2]);
  EXPECT_LT(counts[2], counts[3]);
  EXPECT_EQ(counts[3], counts[4]);
}

TEST(Balance, NarrowsPaceSpread) {
  std::mt19937_64 rng(21);
  int not_worse = 0;
  for (int instance = 0; instance < 100; ++instance) {
    const int n_lans = 2 + static_cast<int>(rng() % 6);
    const int devices = 2 + static_cast<int>(rng() % 15);
    std::vector<double> caps;
    for (int l = 0; l < n_lans; ++l) caps.push_back(10.0 + static_cast<double>(rng() % 400));
    const auto world = accounting_world(caps, devices);
    const int base = 2 + static_cast<int>(rng() % static_cast<unsigned>(devices - 1));
    const auto counts = balance_device_counts(world, base, 1 + static_cast<int>(rng() % 3), k25MiB);
    const auto spread = [&](auto count_of) {
      double lo = 1e300, hi = 0.0;
      for (const auto& lan : world.lans) {
        const double t = estimate_device_round_time(world, lan, count_of(lan.lan_id), 2, k25MiB);
        lo = std::min(lo, t);
        hi = std::max(hi, t);
      }
      return hi / lo;
    };
    const double before = spread([&](LanId) { return base; });
    const double after = spread([&](LanId l) { return counts[static_cast<std::size_t>(l)]; });
    EXPECT_LE(after, before + 1e-12) << "instance " << instance;
    not_worse += after <= before + 1e-12;
  }
  EXPECT_EQ(not_worse, 100);
}

TEST(Balance, RejectsSmallBase) {
  const auto world = accounting_world({170, 170}, 4);
  EXPECT_THROW(balance_device_counts(world, 1, 1, k25MiB), std::invalid_argument);
}

TEST(LanOrchestrate, TwoDevicesOneRoundIsMeanOfLocalModels) {
  auto cfg = small_config(1, 2);
  cfg.dataset.shards_per_device = 1;
  cfg.dataset.num_classes = 2;
  const auto env = harness::build_environment(cfg);
  ASSERT_EQ(env.workload.train[0].rows(), env.workload.train[1].rows());
  ProtocolConfig p = cfg.params;
  p.device_rounds = 1;
  const auto global = env.workload.initial_weights(5);
  const auto out = lan_orchestrate(env.world, env.workload, env.world.lan(0), global, p, 2, 0);

  const auto& log = out.log.device_rounds.at(0);
  EXPECT_EQ(log.selected, (std::vector<DeviceId>{0, 1}));
  std::vector<Weights> local;
  for (DeviceId d : {0, 1}) {
    local.push_back(env.workload.train_device(d, global, p.train, derive_seed(p.seed, {kTagTrain, 0, 0, static_cast<std::uint64_t>(d)})));
  }
  const Vector<double> mean = (local[0].values + local[1].values) / 2.0;
  EXPECT_TRUE(out.weights.values.isApprox(mean, 1e-14));
}

TEST(LanOrchestrate, ElapsedIsTrainPlusPsTime) {
  const auto world = accounting_world({20.0}, 8, true);
  Workload w;
  w.model = ModelSpec{ModelKind::kLogistic, 2, 2};
  w.wire_bytes = k25MiB;
  ProtocolConfig p;
  p.device_rounds = 3;
  p.train.local_epochs = 2;
  const auto out = lan_orchestrate(world, w, world.lan(0), w.initial_weights(1), p, 5, 0);
  const double per_round = 2 * 10.0 + net::comm_time_ps(k25MiB, 20.0);
  EXPECT_DOUBLE_EQ(out.elapsed_s, 3 * per_round);
  for (const auto& r : out.log.device_rounds) {
    EXPECT_EQ(r.topology.kind, net::TopologyKind::kPs);
    EXPECT_DOUBLE_EQ(r.train_s + r.comm_lan_s, per_round);
  }
}

TEST(LanOrchestrate, RejectsBadRequests) {
  const auto world = accounting_world({20.0}, 4, true);
  Workload w;
  w.model = ModelSpec{ModelKind::kLogistic, 2, 2};
  ProtocolConfig p;
  p.device_rounds = 0;
  EXPECT_THROW(lan_orchestrate(world, w, world.lan(0), w.initial_weights(1), p, 2, 0), std::invalid_argument);
  p.device_rounds = 1;
  EXPECT_THROW(lan_orchestrate(world, w, world.lan(0), w.initial_weights(1), p, 5, 0), std::invalid_argument);
  EXPECT_THROW(lan_orchestrate(world, w, world.lan(0), w.initial_weights(1), p, 1, 0), std::invalid_argument);
}

TEST(Protocols, LanflWithOneLanReducesToFedAvg) {
  auto cfg = small_config(1, 12);
  cfg.params.train.weighted_aggregation = false;
  cfg.params.cloud_rounds = 10;
  cfg.params.device_rounds = 1;
  cfg.params.lans_per_round = 1;
  cfg.params.lan_devices_per_round = 5;
  cfg.params.devices_per_round = 5;
  const auto env = harness::build_environment(cfg);
  const RunOptions opts{true, false};
  const auto lan = run_lanfl(env.world, env.workload, cfg.params, {}, opts);
  const auto wan = run_wan_fl(env.world, env.workload, cfg.params, {}, opts);
  ASSERT_EQ(lan.trajectory.size(), wan.trajectory.size());
  for (std::size_t t = 0; t < lan.trajectory.size(); ++t) {
    EXPECT_EQ(lan.rounds[t].lans[0].device_rounds[0].selected, wan.rounds[t].selected);
    EXPECT_LE((lan.trajectory[t].values - wan.trajectory[t].values).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Protocols, HierarchicalWeightingMatchesFlat) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto cfg = small_config(6, 5, seed);
    cfg.params.device_rounds = 1;
    cfg.params.lans_per_round = 3;
    cfg.params.lan_devices_per_round = 3;
    const auto env = harness::build_environment(cfg);
    const auto log = run_lanfl(env.world, env.workload, cfg.params, {}, RunOptions{true, true});
    for (std::size_t t = 0; t < log.rounds.size(); ++t) {
      std::vector<Weights> models;
      std::vector<double> samples;
      for (const auto& m : log.rounds[t].device_models) {
        models.push_back(m.weights);
        samples.push_back(m.sample_count);
      }
      const auto flat = aggregate(std::span<const Weights>(models), std::span<const double>(samples));
      const auto& got = log.trajectory[t].values;
      for (Eigen::Index k = 0; k < got.size(); ++k) {
        EXPECT_NEAR(got(k), flat.values(k), 1e-12 * std::max(1.0, std::fabs(flat.values(k))));
      }
    }
  }
}

TEST(Protocols, LanTotalWeightingIgnoresParticipation) {
  auto cfg = small_config(4, 6);
  cfg.params.lans_per_round = 4;
  cfg.params.lan_devices_per_round = 2;
  cfg.params.cloud_weighting = CloudWeighting::kLanTotal;
  const auto env = harness::build_environment(cfg);
  const auto log = run_lanfl(env.world, env.workload, cfg.params, {}, RunOptions{true, false});
  for (const auto& round : log.rounds) {
    for (const auto& lan : round.lans) {
      EXPECT_DOUBLE_EQ(lan.cloud_weight, static_cast<double>(env.world.lans[lan.lan].sample_total));
    }
  }
  cfg.params.cloud_weighting = CloudWeighting::kParticipants;
  const auto part = run_lanfl(env.world, env.workload, cfg.params, {}, RunOptions{true, false});
  for (const auto& round : part.rounds) {
    for (const auto& lan : round.lans) {
      double total = 0.0;
      for (const DeviceId d : lan.device_rounds.back().selected) total += env.world.device(d).sample_count;
      EXPECT_DOUBLE_EQ(lan.cloud_weight, total);
    }
  }
}

TEST(Protocols, SingleDeviceFedAvgIsCentralizedTraining) {
  auto cfg = small_config(1, 1);
  cfg.params.devices_per_round = 1;
  cfg.params.cloud_rounds = 6;
  cfg.params.train.weighted_aggregation = false;
  const auto env = harness::build_environment(cfg);
  const auto log = run_wan_fl(env.world, env.workload, cfg.params);
  auto w = env.workload.initial_weights(derive_seed(cfg.params.seed, {kTagInit}));
  for (int t = 0; t < 6; ++t) {
    w = local_train(env.workload.model, w, env.workload.train[0], cfg.params.train,
                    derive_seed(cfg.params.seed, {kTagTrain, static_cast<std::uint64_t>(t), 0, 0}));
  }
  EXPECT_EQ(log.final_weights.values, w.values);
}

TEST(Protocols, NoRepeatsWithinARound) {
  auto cfg = small_config(8, 6);
  cfg.params.device_rounds = 3;
  cfg.params.lans_per_round = 4;
  cfg.params.lan_devices_per_round = 4;
  const auto env = harness::build_environment(cfg);
  const auto log = run_lanfl(env.world, env.workload, cfg.params);
  for (const auto& r : log.rounds) {
    EXPECT_EQ(std::set<int>(r.selected.begin(), r.selected.end()).size(), r.selected.size());
    std::set<DeviceId> seen_in_cloud_round;
    for (const auto& lan : r.lans) {
      for (const auto& dr : lan.device_rounds) {
        EXPECT_EQ(std::set<DeviceId>(dr.selected.begin(), dr.selected.end()).size(), dr.selected.size());
        for (DeviceId d : dr.selected) EXPECT_EQ(env.world.device(d).lan_id, lan.lan);
      }
    }
  }
}

TEST(Protocols, Deterministic) {
  auto cfg = small_config(4, 5);
  cfg.params.device_rounds = 2;
  cfg.params.lans_per_round = 2;
  cfg.params.lan_devices_per_round = 3;
  cfg.params.devices_per_round = 6;
  const auto env = harness::build_environment(cfg);
  const auto a = run_lanfl(env.world, env.workload, cfg.params);
  const auto b = run_lanfl(env.world, env.workload, cfg.params);
  EXPECT_EQ(a.final_weights, b.final_weights);
  const auto c = run_wan_fl(env.world, env.workload, cfg.params);
  const auto d = run_wan_fl(env.world, env.workload, cfg.params);
  EXPECT_EQ(c.final_weights, d.final_weights);
  for (std::size_t t = 0; t < c.metrics.size(); ++t) EXPECT_EQ(c.metrics[t].accuracy, d.metrics[t].accuracy);
}

TEST(Protocols, AccountingOnlyTraffic) {
  std::vector<int> samples(200, 80);
  WorldSpec spec;
  spec.fixed_bl = true;
  const auto world = build_world(spec, samples);
  Workload w;
  w.model = ModelSpec{ModelKind::kLogistic, 2, 2};
  w.wire_bytes = k25MiB;

  ProtocolConfig wan;
  wan.cloud_rounds = 1820;
  wan.devices_per_round = 50;
  EXPECT_EQ(static_cast<int>(run_wan_fl(world, w, wan).metrics.back().cumulative_wan_traffic_gib), 2221);

  ProtocolConfig lan;
  lan.cloud_rounds = 240;
  lan.device_rounds = 5;
  lan.lans_per_round = 5;
  lan.lan_devices_per_round = 10;
  EXPECT_EQ(static_cast<int>(run_lanfl(world, w, lan).metrics.back().cumulative_wan_traffic_gib), 29);
}

TEST(Protocols, MoreDeviceRoundsNeverCostMoreTrafficToConverge) {
  auto cfg = small_config(6, 5);
  cfg.dataset.class_separation = 3.0;
  cfg.params.cloud_rounds = 60;
  cfg.params.lans_per_round = 3;
  cfg.params.lan_devices_per_round = 3;
  const auto env = harness::build_environment(cfg);
  auto traffic_to_converge = [&](int rl) -> std::pair<int, double> {
    auto p = cfg.params;
    p.device_rounds = rl;
    const auto log = run_lanfl(env.world, env.workload, p);
    std::vector<double> pct;
    for (const auto& m : log.metrics) pct.push_back(100.0 * m.accuracy);
    const auto c = accounting::converged(pct, 10, 1.0);
    if (!c.converged) return {0, 0.0};
    return {c.round, log.metrics[static_cast<std::size_t>(c.round - 1)].cumulative_wan_traffic_gib};
  };
  const auto [r1, t1] = traffic_to_converge(1);
  const auto [r4, t4] = traffic_to_converge(4);
  if (r1 > 0 && r4 > 0 && r4 <= r1) {
    EXPECT_LE(t4, t1);
    if (r4 < r1) EXPECT_LT(t4, t1);
  }
}

TEST(Protocols, RejectInvalidConfigs) {
  const auto world = accounting_world({20.0, 20.0}, 4, true);
  Workload w;
  w.model = ModelSpec{ModelKind::kLogistic, 2, 2};
  ProtocolConfig p;
  p.lans_per_round = 3;
  EXPECT_THROW(run_lanfl(world, w, p), std::invalid_argument);
  p.lans_per_round = 1;
  p.lan_devices_per_round = 5;
  EXPECT_THROW(run_lanfl(world, w, p), std::invalid_argument);
  p.lan_devices_per_round = 2;
  p.device_rounds = 0;
  EXPECT_THROW(run_lanfl(world, w, p), std::invalid_argument);
  p.device_rounds = 1;
  p.cloud_rounds = 0;
  EXPECT_THROW(run_lanfl(world, w, p), std::invalid_argument);
  p.cloud_rounds = 1;
  p.devices_per_round = 9;
  EXPECT_THROW(run_wan_fl(world, w, p), std::invalid_argument);
}

}  // namespace
}  // namespace lanfl::orchestrator
