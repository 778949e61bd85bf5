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

#include "lanfl/orchestrator/world.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "lanfl/core/train.hpp"

namespace lanfl::orchestrator {

namespace {

double per_lan(const std::vector<double>& values, int lan, const char* field) {
  if (values.size() == 1) return values.front();
  if (static_cast<int>(values.size()) <= lan) {
    throw std::invalid_argument(std::string("world: ") + field + " needs 1 or num_lans entries");
  }
  return values[static_cast<std::size_t>(lan)];
}

}  // namespace

int World::min_lan_size() const {
  int m = lans.empty() ? 0 : lans.front().device_count();
  for (const auto& l : lans) m = std::min(m, l.device_count());
  return m;
}

void World::validate() const {
  if (devices.empty() || lans.empty()) throw std::invalid_argument("world: no devices or LANs");
  std::vector<int> owner_count(devices.size(), 0);
  for (std::size_t i = 0; i < lans.size(); ++i) {
    const auto& lan = lans[i];
    if (lan.lan_id != static_cast<LanId>(i)) throw std::invalid_argument("world: LAN ids must be 0..NL-1");
    if (lan.net.aps.empty()) throw std::invalid_argument("world: LAN without access points");
    std::int64_t samples = 0;
    for (const DeviceId d : lan.devices) {
      const auto& dev = device(d);
      if (dev.lan_id != lan.lan_id) throw std::invalid_argument("world: device LAN mismatch");
      if (!lan.net.has_ap(dev.ap_id)) throw std::invalid_argument("world: device AP not in its LAN");
      ++owner_count[static_cast<std::size_t>(d)];
      samples += dev.sample_count;
    }
    if (samples != lan.sample_total) throw std::invalid_argument("world: LAN sample total mismatch");
  }
  for (std::size_t d = 0; d < devices.size(); ++d) {
    if (devices[d].device_id != static_cast<DeviceId>(d)) {
      throw std::invalid_argument("world: device ids must be 0..N-1");
    }
    if (devices[d].sample_count < 1) throw std::invalid_argument("world: device without samples");
    if (!(devices[d].epoch_compute_time >= 0.0)) throw std::invalid_argument("world: bad compute time");
    if (owner_count[d] != 1) throw std::invalid_argument("world: device must belong to exactly one LAN");
  }
}

World build_world(const WorldSpec& spec, std::span<const int> sample_counts) {
  if (spec.num_lans < 1 || spec.devices_per_lan < 1 || spec.aps_per_lan < 1) {
    throw std::invalid_argument("world: num_lans, devices_per_lan and aps_per_lan must be >= 1");
  }
  const int n = spec.num_lans * spec.devices_per_lan;
  if (static_cast<int>(sample_counts.size()) != n) {
    throw std::invalid_argument("world: expected " + std::to_string(n) + " sample counts");
  }

  World world;
  world.devices.reserve(static_cast<std::size_t>(n));
  for (int l = 0; l < spec.num_lans; ++l) {
    LanDomain lan;
    lan.lan_id = l;
    lan.net.lan_id = l;
    const double backhaul = spec.ap_backhaul_mbps > 0.0 ? spec.ap_backhaul_mbps : net::kUnlimited;
    for (int a = 0; a < spec.aps_per_lan; ++a) {
      lan.net.aps.push_back({l * spec.aps_per_lan + a, per_lan(spec.ap_capacity_mbps, l, "ap_capacity_mbps"),
                             backhaul});
    }
    if (spec.fixed_bl) {
      lan.net.mode = net::FixedBl{per_lan(spec.lan_bandwidth_mbps, l, "lan_bandwidth_mbps")};
    } else {
      lan.net.mode = net::CapacityModel{};
    }
    for (int k = 0; k < spec.devices_per_lan; ++k) {
      const DeviceId id = l * spec.devices_per_lan + k;
      DeviceProfile dev;
      dev.device_id = id;
      dev.lan_id = l;
      dev.ap_id = l * spec.aps_per_lan + k % spec.aps_per_lan;
      dev.sample_count = sample_counts[static_cast<std::size_t>(id)];
      dev.epoch_compute_time = spec.epoch_compute_time_s;
      world.devices.push_back(dev);
      lan.devices.push_back(id);
      lan.sample_total += dev.sample_count;
    }
    world.lans.push_back(std::move(lan));
  }
  world.validate();
  return world;
}

std::uint64_t Workload::model_bytes() const {
  return wire_bytes > 0 ? wire_bytes
                        : static_cast<std::uint64_t>(model.parameter_count()) * kWireBytesPerParameter;
}

Weights Workload::initial_weights(std::uint64_t seed) const {
  Weights w = init_weights<double>(model, seed);
  w.byte_size = model_bytes();
  return w;
}

Weights Workload::train_device(DeviceId device, const Weights& start, const TrainConfig& cfg,
                               std::uint64_t seed) const {
  if (accounting_only()) return start;
  return local_train(model, start, train.at(static_cast<std::size_t>(device)), cfg, seed);
}

double Workload::evaluate(const Weights& w) const {
  if (accounting_only()) return 0.0;
  return lanfl::evaluate(model, w, std::span<const DatasetShard<double>>(test));
}

}  // namespace lanfl::orchestrator
