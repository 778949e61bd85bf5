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

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>

#include "lanfl/core/rng.hpp"
#include "lanfl/core/types.hpp"

namespace lanfl {

enum class ModelKind { kLogistic, kMlp };

/// Architecture of a softmax classifier. Logistic regression stores
/// [W (classes x features, column-major), b]; the MLP stores
/// [W1 (hidden x features), b1, W2 (classes x hidden), b2] with tanh units.
struct ModelSpec {
  ModelKind kind = ModelKind::kLogistic;
  int num_features = 1;
  int num_classes = 2;
  int hidden_units = 16;

  Eigen::Index parameter_count() const {
    const Eigen::Index d = num_features, c = num_classes, h = hidden_units;
    return kind == ModelKind::kLogistic ? c * d + c : h * d + h + c * h + c;
  }

  bool operator==(const ModelSpec&) const = default;
};

template <typename Scalar>
struct LossAndGradient {
  Scalar loss;
  Vector<Scalar> gradient;
};

namespace detail {

template <typename Scalar>
using ConstMatrixMap = Eigen::Map<const Matrix<Scalar>>;
template <typename Scalar>
using ConstVectorMap = Eigen::Map<const Vector<Scalar>>;
template <typename Scalar>
using MatrixMap = Eigen::Map<Matrix<Scalar>>;
template <typename Scalar>
using VectorMap = Eigen::Map<Vector<Scalar>>;

inline void check_shapes(const ModelSpec& spec, Eigen::Index params, Eigen::Index features) {
  if (params != spec.parameter_count()) {
    throw std::invalid_argument("model: parameter vector has wrong dimension");
  }
  if (features != spec.num_features) {
    throw std::invalid_argument("model: feature dimension mismatch");
  }
}

// Row-wise softmax, shifted by the row max for stability.
template <typename Scalar>
Matrix<Scalar> softmax_rows(const Matrix<Scalar>& logits) {
  Matrix<Scalar> p = logits.colwise() - logits.rowwise().maxCoeff();
  p = p.array().exp();
  p.array().colwise() /= p.rowwise().sum().array();
  return p;
}

// Mean cross-entropy of row-wise softmax; overwrites `probs` with (probs - onehot)/n.
template <typename Scalar>
Scalar cross_entropy_residual(const Matrix<Scalar>& logits, const Labels& labels,
                              Matrix<Scalar>& probs) {
  const auto n = logits.rows();
  probs = softmax_rows(logits);
  Scalar loss = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const int y = labels(i);
    const Scalar row_max = logits.row(i).maxCoeff();
    const Scalar lse = row_max + std::log((logits.row(i).array() - row_max).exp().sum());
    loss += lse - logits(i, y);
    probs(i, y) -= Scalar(1);
  }
  probs /= static_cast<Scalar>(n);
  return loss / static_cast<Scalar>(n);
}

}  // namespace detail

/// Class scores for every row of `features`.
template <typename Scalar>
Matrix<Scalar> logits(const ModelSpec& spec, const Vector<Scalar>& params,
                      const Matrix<Scalar>& features) {
  using namespace detail;
  check_shapes(spec, params.size(), features.cols());
  const Eigen::Index d = spec.num_features, c = spec.num_classes, h = spec.hidden_units;
  const Scalar* p = params.data();
  if (spec.kind == ModelKind::kLogistic) {
    ConstMatrixMap<Scalar> w(p, c, d);
    ConstVectorMap<Scalar> b(p + c * d, c);
    return (features * w.transpose()).rowwise() + b.transpose();
  }
  ConstMatrixMap<Scalar> w1(p, h, d);
  ConstVectorMap<Scalar> b1(p + h * d, h);
  ConstMatrixMap<Scalar> w2(p + h * d + h, c, h);
  ConstVectorMap<Scalar> b2(p + h * d + h + c * h, c);
  const Matrix<Scalar> act = ((features * w1.transpose()).rowwise() + b1.transpose()).array().tanh();
  return (act * w2.transpose()).rowwise() + b2.transpose();
}

/// Mean softmax cross-entropy over the rows of `features` and its gradient.
template <typename Scalar>
LossAndGradient<Scalar> loss_and_gradient(const ModelSpec& spec, const Vector<Scalar>& params,
                                          const Matrix<Scalar>& features, const Labels& labels) {
  using namespace detail;
  check_shapes(spec, params.size(), features.cols());
  if (features.rows() == 0 || features.rows() != labels.size()) {
    throw std::invalid_argument("loss_and_gradient: empty batch or label count mismatch");
  }
  const Eigen::Index d = spec.num_features, c = spec.num_classes, h = spec.hidden_units;
  const Scalar* p = params.data();
  Vector<Scalar> grad(params.size());
  Scalar* g = grad.data();
  Matrix<Scalar> residual;

  if (spec.kind == ModelKind::kLogistic) {
    ConstMatrixMap<Scalar> w(p, c, d);
    ConstVectorMap<Scalar> b(p + c * d, c);
    const Matrix<Scalar> z = (features * w.transpose()).rowwise() + b.transpose();
    const Scalar loss = cross_entropy_residual(z, labels, residual);
    MatrixMap<Scalar>(g, c, d).noalias() = residual.transpose() * features;
    VectorMap<Scalar>(g + c * d, c) = residual.colwise().sum().transpose();
    return {loss, std::move(grad)};
  }

  ConstMatrixMap<Scalar> w1(p, h, d);
  ConstVectorMap<Scalar> b1(p + h * d, h);
  ConstMatrixMap<Scalar> w2(p + h * d + h, c, h);
  ConstVectorMap<Scalar> b2(p + h * d + h + c * h, c);
  const Matrix<Scalar> act = ((features * w1.transpose()).rowwise() + b1.transpose()).array().tanh();
  const Matrix<Scalar> z = (act * w2.transpose()).rowwise() + b2.transpose();
  const Scalar loss = cross_entropy_residual(z, labels, residual);

  MatrixMap<Scalar>(g + h * d + h, c, h).noalias() = residual.transpose() * act;
  VectorMap<Scalar>(g + h * d + h + c * h, c) = residual.colwise().sum().transpose();
  const Matrix<Scalar> hidden_residual =
      ((residual * w2).array() * (Scalar(1) - act.array().square())).matrix();
  MatrixMap<Scalar>(g, h, d).noalias() = hidden_residual.transpose() * features;
  VectorMap<Scalar>(g + h * d, h) = hidden_residual.colwise().sum().transpose();
  return {loss, std::move(grad)};
}

template <typename Scalar>
Labels predict(const ModelSpec& spec, const Vector<Scalar>& params, const Matrix<Scalar>& features) {
  const Matrix<Scalar> z = logits(spec, params, features);
  Labels out(z.rows());
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    Eigen::Index arg;
    z.row(i).maxCoeff(&arg);
    out(i) = static_cast<int>(arg);
  }
  return out;
}

/// Small Gaussian initialisation (std 0.01); biases start at zero.
template <typename Scalar = double>
ModelWeights<Scalar> init_weights(const ModelSpec& spec, std::uint64_t seed) {
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 0.01);
  Vector<Scalar> values = Vector<Scalar>::Zero(spec.parameter_count());
  const Eigen::Index d = spec.num_features, c = spec.num_classes, h = spec.hidden_units;
  if (spec.kind == ModelKind::kLogistic) {
    for (Eigen::Index i = 0; i < c * d; ++i) values(i) = static_cast<Scalar>(normal(rng));
  } else {
    // Hidden layer needs a larger scale to break symmetry through tanh.
    std::normal_distribution<double> wide(0.0, 1.0 / std::sqrt(static_cast<double>(d)));
    for (Eigen::Index i = 0; i < h * d; ++i) values(i) = static_cast<Scalar>(wide(rng));
    const Eigen::Index off = h * d + h;
    for (Eigen::Index i = 0; i < c * h; ++i) values(off + i) = static_cast<Scalar>(normal(rng));
  }
  return make_weights<Scalar>(std::move(values));
}

}  // namespace lanfl
