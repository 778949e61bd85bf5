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

#include "lanfl/accounting/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace lanfl::accounting {

namespace {

std::uint64_t checked_product(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  std::uint64_t ab = 0, abc = 0;
  if (__builtin_mul_overflow(a, b, &ab) || __builtin_mul_overflow(ab, c, &abc)) {
    throw std::overflow_error("WAN traffic byte count overflows 64 bits");
  }
  return abc;
}

}  // namespace

double round_seconds(const CloudRoundTiming& round) {
  if (round.comm_wan_s < 0.0) throw std::invalid_argument("clock_time: negative com_T_W");
  double total = round.comm_wan_s;
  for (const auto& dr : round.device_rounds) {
    if (dr.train_s < 0.0 || dr.comm_lan_s < 0.0) {
      throw std::invalid_argument("clock_time: negative device-round component");
    }
    total += dr.train_s + dr.comm_lan_s;
  }
  return total;
}

double clock_time_hours(std::span<const CloudRoundTiming> rounds) {
  double seconds = 0.0;
  for (const auto& r : rounds) seconds += round_seconds(r);
  return seconds / kSecondsPerHour;
}

Traffic& Traffic::operator+=(Traffic other) {
  if (__builtin_add_overflow(bytes, other.bytes, &bytes)) {
    throw std::overflow_error("WAN traffic byte count overflows 64 bits");
  }
  return *this;
}

Traffic wan_traffic_lanfl(std::uint64_t cloud_rounds, std::uint64_t lans_per_round,
                          std::uint64_t model_bytes) {
  return Traffic{checked_product(cloud_rounds, lans_per_round, model_bytes)};
}

Traffic wan_traffic_wanfl(std::uint64_t cloud_rounds, std::uint64_t devices_per_round,
                          std::uint64_t model_bytes) {
  return Traffic{checked_product(cloud_rounds, devices_per_round, model_bytes)};
}

double monetary_cost(double clock_hours, double downlink_gb, const CostModel& cm, double uplink_gb) {
  if (clock_hours < 0.0 || downlink_gb < 0.0 || uplink_gb < 0.0) {
    throw std::invalid_argument("monetary_cost: negative input");
  }
  return cm.hourly_rate * clock_hours + cm.per_gb_downlink * downlink_gb +
         cm.per_gb_uplink * uplink_gb;
}

Convergence converged(std::span<const double> accuracy_pct, int window, double threshold_pct) {
  if (window < 2) throw std::invalid_argument("converged: window must be >= 2");
  const auto w = static_cast<std::size_t>(window);
  for (std::size_t end = w; end <= accuracy_pct.size(); ++end) {
    const auto tail = accuracy_pct.subspan(end - w, w);
    double mean = 0.0;
    for (const double a : tail) mean += a;
    mean /= static_cast<double>(w);
    double ss = 0.0;
    for (const double a : tail) ss += (a - mean) * (a - mean);
    if (std::sqrt(ss / static_cast<double>(w - 1)) < threshold_pct) {
      return {true, static_cast<int>(end)};
    }
  }
  return {};
}

RoundMetrics MetricsAccumulator::add_round(const CloudRoundTiming& timing, Traffic downlink,
                                           Traffic uplink, double accuracy) {
  if (!(accuracy >= 0.0 && accuracy <= 1.0)) {
    throw std::invalid_argument("RoundMetrics: accuracy outside [0, 1]");
  }
  clock_seconds_ += round_seconds(timing);
  downlink_ += downlink;
  uplink_ += uplink;

  RoundMetrics m;
  m.cloud_round = static_cast<int>(rounds_.size()) + 1;
  m.com_t_w = timing.comm_wan_s;
  for (const auto& dr : timing.device_rounds) {
    m.sum_com_t_l += dr.comm_lan_s;
    m.sum_train_t += dr.train_s;
  }
  m.cumulative_clock_hours = clock_seconds_ / kSecondsPerHour;
  m.cumulative_wan_traffic_gib = downlink_.gib();
  m.accuracy = accuracy;
  m.cumulative_cost =
      monetary_cost(m.cumulative_clock_hours, downlink_.gib(), cost_, uplink_.gib());
  rounds_.push_back(m);
  return m;
}

}  // namespace lanfl::accounting
