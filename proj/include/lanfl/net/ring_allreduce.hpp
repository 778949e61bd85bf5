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

#include <span>
#include <stdexcept>
#include <vector>

#include "lanfl/core/types.hpp"

namespace lanfl::net {

/// Simulated ring all-reduce of weighted model updates. Member r starts with
/// weight_r * w_r, the vector is cut into one chunk per member, and n - 1
/// reduce-scatter steps followed by n - 1 all-gather steps pass chunks to the
/// successor (member r sends to r + 1 mod n). Every member's final buffer is
/// returned, already divided by the total weight.
template <typename Scalar>
std::vector<Vector<Scalar>> ring_allreduce_buffers(std::span<const ModelWeights<Scalar>> updates,
                                                   std::span<const Scalar> weights) {
  const std::size_t n = updates.size();
  if (n < 2) throw std::invalid_argument("ring_allreduce: need at least 2 members");
  if (weights.size() != n) throw std::invalid_argument("ring_allreduce: weight count mismatch");
  const Eigen::Index dim = updates.front().size();

  Scalar total = 0;
  std::vector<Vector<Scalar>> buf(n);
  for (std::size_t r = 0; r < n; ++r) {
    if (updates[r].size() != dim) throw std::invalid_argument("ring_allreduce: dimension mismatch");
    if (!(weights[r] >= 0)) throw std::invalid_argument("ring_allreduce: negative weight");
    buf[r] = weights[r] * updates[r].values;
    total += weights[r];
  }
  if (!(total > 0)) throw std::invalid_argument("ring_allreduce: weights sum to zero");

  // Chunk c covers [begin(c), begin(c + 1)); chunks may be empty when dim < n.
  const auto begin = [&](std::size_t c) {
    return static_cast<Eigen::Index>(c) * dim / static_cast<Eigen::Index>(n);
  };
  const auto chunk_of = [&](std::size_t r, std::size_t step, std::size_t shift) {
    return (r + n + shift - step % n) % n;
  };

  std::vector<Vector<Scalar>> in_flight(n);
  // Reduce-scatter: after step s, member r + 1 has accumulated s + 2 contributions
  // for chunk (r - s) mod n.
  for (std::size_t step = 0; step + 1 < n; ++step) {
    for (std::size_t r = 0; r < n; ++r) {
      const std::size_t c = chunk_of(r, step, 0);
      in_flight[r] = buf[r].segment(begin(c), begin(c + 1) - begin(c));
    }
    for (std::size_t r = 0; r < n; ++r) {
      const std::size_t c = chunk_of(r, step, 0);
      buf[(r + 1) % n].segment(begin(c), begin(c + 1) - begin(c)) += in_flight[r];
    }
  }
  // Member r now owns the reduced chunk (r + 1) mod n; circulate the results.
  for (std::size_t step = 0; step + 1 < n; ++step) {
    for (std::size_t r = 0; r < n; ++r) {
      const std::size_t c = chunk_of(r, step, 1);
      in_flight[r] = buf[r].segment(begin(c), begin(c + 1) - begin(c));
    }
    for (std::size_t r = 0; r < n; ++r) {
      const std::size_t c = chunk_of(r, step, 1);
      buf[(r + 1) % n].segment(begin(c), begin(c + 1) - begin(c)) = in_flight[r];
    }
  }
  for (auto& b : buf) b /= total;
  return buf;
}

/// Weighted mean computed on the ring; returns member 0's copy.
template <typename Scalar>
ModelWeights<Scalar> ring_allreduce(std::span<const ModelWeights<Scalar>> updates,
                                    std::span<const Scalar> weights) {
  auto buffers = ring_allreduce_buffers(updates, weights);
  return ModelWeights<Scalar>{std::move(buffers.front()), updates.front().byte_size};
}

}  // namespace lanfl::net
