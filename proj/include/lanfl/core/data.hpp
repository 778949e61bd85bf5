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
#include <utility>
#include <vector>

#include "lanfl/core/types.hpp"

namespace lanfl {

/// Gaussian class clusters: each class mean is drawn from N(0, separation^2 I)
/// and samples scatter around it with standard deviation `noise`. Labels are
/// balanced (sample i has class i mod num_classes).
struct SyntheticSpec {
  int num_classes = 10;
  int num_features = 20;
  int num_samples = 1000;
  double class_separation = 1.0;
  double noise = 1.0;

  bool operator==(const SyntheticSpec&) const = default;
};

LabeledDataset<double> make_synthetic(const SyntheticSpec& spec, std::uint64_t seed);

/// Label-skew partition: rows are sorted by label, cut into
/// n_devices * shards_per_device contiguous shards, and the shards are dealt to
/// devices in a seeded random order. Device d receives shards_per_device shards
/// and owns shard index d in the result.
std::vector<DatasetShard<double>> partition_noniid(const LabeledDataset<double>& samples,
                                                   int n_devices, int shards_per_device,
                                                   std::uint64_t seed);

/// Seeded split of one device's rows; the train part keeps round(fraction*n)
/// rows (at least one).
std::pair<DatasetShard<double>, DatasetShard<double>> train_test_split(
    const DatasetShard<double>& shard, double train_fraction, std::uint64_t seed);

}  // namespace lanfl
