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
#include <initializer_list>
#include <random>
#include <span>
#include <vector>

namespace lanfl {

using Rng = std::mt19937_64;

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Derives an independent stream seed from a base seed and a tag path, e.g.
/// `derive_seed(run_seed, {kTagTrain, round, device})`.
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> tags);

/// Unbiased integer in [0, bound) using rejection on the raw 64-bit stream, so
/// the sequence does not depend on the standard library's distributions.
std::uint64_t uniform_index(Rng& rng, std::uint64_t bound);

/// In-place Fisher-Yates shuffle driven by `uniform_index`.
template <typename T>
void shuffle(std::span<T> items, Rng& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const auto j = uniform_index(rng, i);
    std::swap(items[i - 1], items[j]);
  }
}

/// Identity permutation of size n, shuffled.
std::vector<int> random_permutation(int n, Rng& rng);

// Stream tags used by the protocol engines.
inline constexpr std::uint64_t kTagLanSelect = 0x4c414e53;   // "LANS"
inline constexpr std::uint64_t kTagDeviceSelect = 0x44455653;  // "DEVS"
inline constexpr std::uint64_t kTagTrain = 0x5452414e;      // "TRAN"
inline constexpr std::uint64_t kTagInit = 0x494e4954;       // "INIT"
inline constexpr std::uint64_t kTagData = 0x44415441;       // "DATA"
inline constexpr std::uint64_t kTagSplit = 0x53504c54;      // "SPLT"

}  // namespace lanfl
