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
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace lanfl {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using Labels = Eigen::VectorXi;

using DeviceId = int;
using LanId = int;
using ApId = int;

// Bytes per parameter when a model is shipped over the network (float32).
inline constexpr std::uint64_t kWireBytesPerParameter = 4;

/// Raised when training produces a non-finite parameter.
class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Flat parameter vector plus the size it occupies on the wire.
///
/// `byte_size` is normally `values.size() * kWireBytesPerParameter`, but runs
/// that model a larger network (e.g. a 25 MiB CNN) override it while keeping a
/// small trainable vector.
template <typename Scalar = double>
struct ModelWeights {
  Vector<Scalar> values;
  std::uint64_t byte_size = 0;

  Eigen::Index size() const { return values.size(); }
  bool all_finite() const { return values.allFinite(); }

  bool operator==(const ModelWeights& other) const {
    return byte_size == other.byte_size && values.size() == other.values.size() &&
           values == other.values;
  }
};

template <typename Scalar>
ModelWeights<Scalar> make_weights(Vector<Scalar> values) {
  const auto bytes = static_cast<std::uint64_t>(values.size()) * kWireBytesPerParameter;
  return ModelWeights<Scalar>{std::move(values), bytes};
}

struct DeviceProfile {
  DeviceId device_id = 0;
  LanId lan_id = 0;
  ApId ap_id = 0;
  int sample_count = 1;             // training samples held (m_k)
  double epoch_compute_time = 1.0;  // seconds per local epoch
};

/// Rows of `features` are samples.
template <typename Scalar = double>
struct DatasetShard {
  Matrix<Scalar> features;
  Labels labels;
  DeviceId owner = 0;

  Eigen::Index rows() const { return features.rows(); }
  bool empty() const { return features.rows() == 0; }
};

/// A labelled dataset before it is split across devices.
template <typename Scalar = double>
struct LabeledDataset {
  Matrix<Scalar> features;
  Labels labels;
  int num_classes = 0;

  Eigen::Index rows() const { return features.rows(); }
};

struct TrainConfig {
  int local_epochs = 1;
  int batch_size = 10;
  double learning_rate = 0.05;
  bool weighted_aggregation = true;

  bool operator==(const TrainConfig&) const = default;
};

}  // namespace lanfl
