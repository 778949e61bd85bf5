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

namespace lanfl::accounting {

inline constexpr std::uint64_t kBytesPerGiB = std::uint64_t{1} << 30;
inline constexpr double kSecondsPerHour = 3600.0;

struct DeviceRoundTiming {
  double train_s = 0.0;     // train_T_C of the slowest participant
  double comm_lan_s = 0.0;  // com_T_L
};

/// Critical-path timing of one cloud round.
struct CloudRoundTiming {
  double comm_wan_s = 0.0;  // com_T_W, download plus upload
  std::vector<DeviceRoundTiming> device_rounds;
};

/// com_T_W + sum over device rounds of (train_T_C + com_T_L), in seconds.
double round_seconds(const CloudRoundTiming& round);

/// Total clock time in hours; throws on a negative component.
double clock_time_hours(std::span<const CloudRoundTiming> rounds);

/// WAN byte counts stay integral; conversion to GiB happens only on read.
struct Traffic {
  std::uint64_t bytes = 0;

  double gib() const { return static_cast<double>(bytes) / static_cast<double>(kBytesPerGiB); }
  std::uint64_t whole_gib() const { return bytes / kBytesPerGiB; }
  Traffic& operator+=(Traffic other);
};

/// RW * NL_s * |w|: one model per selected LAN per cloud round.
Traffic wan_traffic_lanfl(std::uint64_t cloud_rounds, std::uint64_t lans_per_round,
                          std::uint64_t model_bytes);

/// RW * N_s * |w|: one model per selected device per cloud round.
Traffic wan_traffic_wanfl(std::uint64_t cloud_rounds, std::uint64_t devices_per_round,
                          std::uint64_t model_bytes);

struct CostModel {
  double hourly_rate = 0.204;     // USD per hour of the aggregation server
  double per_gb_downlink = 0.09;  // USD per GB sent from the cloud
  double per_gb_uplink = 0.0;

  bool operator==(const CostModel&) const = default;
};

/// hourly_rate * hours + per_gb_downlink * downlink GB + per_gb_uplink * uplink GB.
double monetary_cost(double clock_hours, double downlink_gb, const CostModel& cm,
                     double uplink_gb = 0.0);

struct Convergence {
  bool converged = false;
  int round = 0;  // 1-based index into the history; 0 when not converged
};

inline constexpr int kConvergenceWindow = 20;
inline constexpr double kConvergenceStdPct = 0.2;

/// First round whose trailing window of accuracies (in percent) has a sample
/// standard deviation below `threshold_pct`.
Convergence converged(std::span<const double> accuracy_pct, int window = kConvergenceWindow,
                      double threshold_pct = kConvergenceStdPct);

struct RoundMetrics {
  int cloud_round = 0;
  double com_t_w = 0.0;
  double sum_com_t_l = 0.0;
  double sum_train_t = 0.0;
  double cumulative_clock_hours = 0.0;
  double cumulative_wan_traffic_gib = 0.0;  // downlink
  double accuracy = 0.0;                    // fraction in [0, 1]
  double cumulative_cost = 0.0;
};

/// Folds per-round timings and traffic into cumulative RoundMetrics, in round order.
class MetricsAccumulator {
 public:
  explicit MetricsAccumulator(CostModel cost = {}) : cost_(cost) {}

  RoundMetrics add_round(const CloudRoundTiming& timing, Traffic downlink, Traffic uplink,
                         double accuracy);

  const std::vector<RoundMetrics>& rounds() const { return rounds_; }
  double clock_seconds() const { return clock_seconds_; }
  Traffic downlink() const { return downlink_; }
  Traffic uplink() const { return uplink_; }

 private:
  CostModel cost_;
  double clock_seconds_ = 0.0;
  Traffic downlink_;
  Traffic uplink_;
  std::vector<RoundMetrics> rounds_;
};

}  // namespace lanfl::accounting
