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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "lanfl/core/model.hpp"
#include "oracles.hpp"

namespace lanfl {
namespace {

struct Batch {
  Matrix<double> x;
  Labels y;
};

Batch random_batch(int n, int d, int c, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Batch b{Matrix<double>(n, d), Labels(n)};
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < d; ++j) b.x(i, j) = normal(rng);
    b.y(i) = static_cast<int>(rng() % static_cast<std::uint64_t>(c));
  }
  return b;
}

Vector<double> random_params(Eigen::Index p, std::uint64_t seed, double scale = 0.5) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, scale);
  Vector<double> v(p);
  for (auto& x : v) x = normal(rng);
  return v;
}

double central_difference(const ModelSpec& spec, Vector<double> p, const Batch& b, Eigen::Index k) {
  const double h = 1e-5 * std::max(1.0, std::fabs(p(k)));
  const double orig = p(k);
  p(k) = orig + h;
  const double up = loss_and_gradient(spec, p, b.x, b.y).loss;
  p(k) = orig - h;
  const double down = loss_and_gradient(spec, p, b.x, b.y).loss;
  return (up - down) / (2 * h);
}

TEST(Model, ParameterCount) {
  EXPECT_EQ((ModelSpec{ModelKind::kLogistic, 9, 2}.parameter_count()), 20);
  EXPECT_EQ((ModelSpec{ModelKind::kMlp, 4, 3, 5}.parameter_count()), 5 * 4 + 5 + 3 * 5 + 3);
}

TEST(Model, LogisticGradientMatchesFiniteDifferences) {
  const ModelSpec spec{ModelKind::kLogistic, 9, 2};
  for (std::uint64_t trial = 0; trial < 20; ++trial) {
    const auto b = random_batch(16, 9, 2, trial);
    const auto p = random_params(spec.parameter_count(), 100 + trial);
    const auto g = loss_and_gradient(spec, p, b.x, b.y).gradient;
    for (Eigen::Index k = 0; k < p.size(); ++k) {
      const double fd = central_difference(spec, p, b, k);
      EXPECT_NEAR(g(k), fd, 1e-4 * std::max(1e-3, std::fabs(fd))) << "trial " << trial << " k " << k;
    }
  }
}

TEST(Model, MlpGradientMatchesFiniteDifferences) {
  const ModelSpec spec{ModelKind::kMlp, 5, 3, 4};
  for (std::uint64_t trial = 0; trial < 10; ++trial) {
    const auto b = random_batch(12, 5, 3, 7 + trial);
    const auto p = random_params(spec.parameter_count(), 300 + trial);
    const auto g = loss_and_gradient(spec, p, b.x, b.y).gradient;
    for (Eigen::Index k = 0; k < p.size(); ++k) {
      const double fd = central_difference(spec, p, b, k);
      EXPECT_NEAR(g(k), fd, 1e-4 * std::max(1e-3, std::fabs(fd)));
    }
  }
}

TEST(Model, LogisticGradientMatchesLoopOracle) {
  const ModelSpec spec{ModelKind::kLogistic, 6, 4};
  const auto b = random_batch(30, 6, 4, 11);
  const auto p = random_params(spec.parameter_count(), 12);
  const auto g = loss_and_gradient(spec, p, b.x, b.y).gradient;
  const auto want = oracle::logistic_gradient(std::vector<double>(p.begin(), p.end()), b.x, b.y, 4);
  for (Eigen::Index k = 0; k < g.size(); ++k) EXPECT_NEAR(g(k), want[static_cast<std::size_t>(k)], 1e-12);
}

TEST(Model, LossIsStableForLargeLogits) {
  const ModelSpec spec{ModelKind::kLogistic, 1, 2};
  Matrix<double> x(1, 1);
  x << 1000.0;
  Labels y(1);
  y << 0;
  Vector<double> p(4);
  p << 1.0, -1.0, 0.0, 0.0;
  const auto r = loss_and_gradient(spec, p, x, y);
  EXPECT_TRUE(std::isfinite(r.loss));
  EXPECT_NEAR(r.loss, 0.0, 1e-12);
  EXPECT_TRUE(r.gradient.allFinite());
}

TEST(Model, ShapeMismatchThrows) {
  const ModelSpec spec{ModelKind::kLogistic, 3, 2};
  const auto b = random_batch(4, 2, 2, 1);
  EXPECT_THROW(loss_and_gradient<double>(spec, Vector<double>::Zero(8), b.x, b.y), std::invalid_argument);
  EXPECT_THROW(loss_and_gradient<double>(spec, Vector<double>::Zero(3), b.x, b.y), std::invalid_argument);
}

TEST(Model, InitWeightsDeterministicAndSized) {
  const ModelSpec spec{ModelKind::kMlp, 8, 3, 6};
  const auto a = init_weights<double>(spec, 42);
  const auto b = init_weights<double>(spec, 42);
  const auto c = init_weights<double>(spec, 43);
  EXPECT_EQ(a, b);
  EXPECT_NE(a.values, c.values);
  EXPECT_EQ(a.size(), spec.parameter_count());
  EXPECT_EQ(a.byte_size, static_cast<std::uint64_t>(spec.parameter_count()) * kWireBytesPerParameter);
}

TEST(Model, FloatInstantiationCompiles) {
  const ModelSpec spec{ModelKind::kLogistic, 2, 2};
  Matrix<float> x(2, 2);
  x << 1, 0, 0, 1;
  Labels y(2);
  y << 0, 1;
  const auto r = loss_and_gradient<float>(spec, Vector<float>::Zero(6), x, y);
  EXPECT_NEAR(r.loss, std::log(2.0f), 1e-6f);
}

}  // namespace
}  // namespace lanfl
