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

#include "lanfl/core/data.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

#include "lanfl/core/rng.hpp"

namespace lanfl {

namespace {

DatasetShard<double> gather(const Matrix<double>& features, const Labels& labels,
                            const std::vector<int>& rows, DeviceId owner) {
  DatasetShard<double> shard;
  shard.features = features(rows, Eigen::all);
  shard.labels = labels(rows);
  shard.owner = owner;
  return shard;
}

}  // namespace

LabeledDataset<double> make_synthetic(const SyntheticSpec& spec, std::uint64_t seed) {
  if (spec.num_classes < 2 || spec.num_features < 1 || spec.num_samples < 1) {
    throw std::invalid_argument("make_synthetic: need >= 2 classes, >= 1 feature and sample");
  }
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  Matrix<double> means(spec.num_classes, spec.num_features);
  for (Eigen::Index i = 0; i < means.size(); ++i) {
    means.data()[i] = spec.class_separation * normal(rng);
  }

  LabeledDataset<double> out;
  out.num_classes = spec.num_classes;
  out.features.resize(spec.num_samples, spec.num_features);
  out.labels.resize(spec.num_samples);
  for (int i = 0; i < spec.num_samples; ++i) {
    const int y = i % spec.num_classes;
    out.labels(i) = y;
    for (int j = 0; j < spec.num_features; ++j) {
      out.features(i, j) = means(y, j) + spec.noise * normal(rng);
    }
  }
  return out;
}

std::vector<DatasetShard<double>> partition_noniid(const LabeledDataset<double>& samples,
                                                   int n_devices, int shards_per_device,
                                                   std::uint64_t seed) {
  if (n_devices < 1 || shards_per_device < 1) {
    throw std::invalid_argument("partition_noniid: n_devices and shards_per_device must be >= 1");
  }
  const auto rows = samples.rows();
  const std::int64_t num_shards = static_cast<std::int64_t>(n_devices) * shards_per_device;
  if (rows == 0 || rows < num_shards) {
    throw std::invalid_argument("partition_noniid: " + std::to_string(rows) +
                                " samples cannot fill " + std::to_string(num_shards) + " shards");
  }

  std::vector<int> by_label(static_cast<std::size_t>(rows));
  std::iota(by_label.begin(), by_label.end(), 0);
  std::stable_sort(by_label.begin(), by_label.end(),
                   [&](int a, int b) { return samples.labels(a) < samples.labels(b); });

  // Shard s covers [bounds[s], bounds[s+1]); the first rows % num_shards shards get one extra row.
  std::vector<std::int64_t> bounds(static_cast<std::size_t>(num_shards) + 1, 0);
  const std::int64_t base = rows / num_shards, extra = rows % num_shards;
  for (std::int64_t s = 0; s < num_shards; ++s) {
    bounds[s + 1] = bounds[s] + base + (s < extra ? 1 : 0);
  }

  Rng rng(seed);
  const std::vector<int> deal = random_permutation(static_cast<int>(num_shards), rng);

  std::vector<DatasetShard<double>> out;
  out.reserve(static_cast<std::size_t>(n_devices));
  for (int d = 0; d < n_devices; ++d) {
    std::vector<int> rows_for_device;
    for (int k = 0; k < shards_per_device; ++k) {
      const int s = deal[static_cast<std::size_t>(d) * shards_per_device + k];
      rows_for_device.insert(rows_for_device.end(), by_label.begin() + bounds[s],
                             by_label.begin() + bounds[s + 1]);
    }
    out.push_back(gather(samples.features, samples.labels, rows_for_device, d));
  }
  return out;
}

std::pair<DatasetShard<double>, DatasetShard<double>> train_test_split(
    const DatasetShard<double>& shard, double train_fraction, std::uint64_t seed) {
  if (shard.empty()) throw std::invalid_argument("train_test_split: empty shard");
  if (!(train_fraction > 0.0 && train_fraction <= 1.0)) {
    throw std::invalid_argument("train_test_split: fraction must be in (0, 1]");
  }
  const int n = static_cast<int>(shard.rows());
  Rng rng(seed);
  const std::vector<int> perm = random_permutation(n, rng);
  const int n_train =
      std::clamp(static_cast<int>(std::lround(train_fraction * n)), 1, n);
  const std::vector<int> train_rows(perm.begin(), perm.begin() + n_train);
  const std::vector<int> test_rows(perm.begin() + n_train, perm.end());
  return {gather(shard.features, shard.labels, train_rows, shard.owner),
          gather(shard.features, shard.labels, test_rows, shard.owner)};
}

}  // namespace lanfl
