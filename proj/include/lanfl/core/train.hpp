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

#include "lanfl/core/model.hpp"
#include "lanfl/core/rng.hpp"
#include "lanfl/core/types.hpp"

namespace lanfl {

/// E epochs of mini-batch SGD on the shard's mean cross-entropy. Each epoch
/// visits the rows in a fresh seeded order; the final batch of an epoch may be
/// short. The input weights are left untouched.
template <typename Scalar>
ModelWeights<Scalar> local_train(const ModelSpec& spec, const ModelWeights<Scalar>& start,
                                 const DatasetShard<Scalar>& shard, const TrainConfig& cfg,
                                 std::uint64_t seed) {
  if (shard.empty()) throw std::invalid_argument("local_train: empty shard");
  if (cfg.local_epochs < 1 || cfg.batch_size < 1 || !(cfg.learning_rate >= 0.0)) {
    throw std::invalid_argument("local_train: invalid train config");
  }
  if (!start.all_finite()) throw std::invalid_argument("local_train: non-finite start weights");

  ModelWeights<Scalar> out = start;
  const int n = static_cast<int>(shard.rows());
  const int batch = std::min(cfg.batch_size, n);
  const auto lr = static_cast<Scalar>(cfg.learning_rate);
  Rng rng(seed);
  std::vector<int> order(static_cast<std::size_t>(n));

  for (int epoch = 0; epoch < cfg.local_epochs; ++epoch) {
    order = random_permutation(n, rng);
    for (int begin = 0; begin < n; begin += batch) {
      const int end = std::min(begin + batch, n);
      const std::vector<int> rows(order.begin() + begin, order.begin() + end);
      const Matrix<Scalar> x = shard.features(rows, Eigen::all);
      const Labels y = shard.labels(rows);
      const auto step = loss_and_gradient(spec, out.values, x, y);
      out.values.noalias() -= lr * step.gradient;
    }
    if (!out.all_finite()) {
      throw DivergenceError("local_train: weights diverged on device " +
                            std::to_string(shard.owner));
    }
  }
  return out;
}

/// Weighted mean sum_i weight_i * w_i / sum_i weight_i.
template <typename Scalar>
ModelWeights<Scalar> aggregate(std::span<const ModelWeights<Scalar>> updates,
                               std::span<const Scalar> weights) {
  if (updates.empty()) throw std::invalid_argument("aggregate: no updates");
  if (updates.size() != weights.size()) {
    throw std::invalid_argument("aggregate: update/weight count mismatch");
  }
  const auto dim = updates.front().size();
  Vector<Scalar> acc = Vector<Scalar>::Zero(dim);
  Scalar total = 0;
  for (std::size_t i = 0; i < updates.size(); ++i) {
    if (updates[i].size() != dim) throw std::invalid_argument("aggregate: dimension mismatch");
    if (!(weights[i] >= 0)) throw std::invalid_argument("aggregate: negative weight");
    acc.noalias() += weights[i] * updates[i].values;
    total += weights[i];
  }
  if (!(total > 0)) throw std::invalid_argument("aggregate: weights sum to zero");
  return ModelWeights<Scalar>{acc / total, updates.front().byte_size};
}

/// Unweighted mean.
template <typename Scalar>
ModelWeights<Scalar> aggregate(std::span<const ModelWeights<Scalar>> updates) {
  const std::vector<Scalar> ones(updates.size(), Scalar(1));
  return aggregate(updates, std::span<const Scalar>(ones));
}

/// Fraction of correctly classified rows over the union of the shards.
template <typename Scalar>
double evaluate(const ModelSpec& spec, const ModelWeights<Scalar>& w,
                std::span<const DatasetShard<Scalar>> test_shards) {
  std::int64_t correct = 0, total = 0;
  for (const auto& shard : test_shards) {
    if (shard.empty()) continue;
    const Labels predicted = predict(spec, w.values, shard.features);
    correct += (predicted.array() == shard.labels.array()).count();
    total += shard.rows();
  }
  if (total == 0) throw std::invalid_argument("evaluate: no test samples");
  return static_cast<double>(correct) / static_cast<double>(total);
}

}  // namespace lanfl
