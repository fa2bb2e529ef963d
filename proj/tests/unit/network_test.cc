// Copyright 2026 The DSRM Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <numeric>
#include <random>
#include <sstream>

#include "dsrm/checkpoint.h"
#include "dsrm/error.h"
#include "dsrm/network.h"
#include "fixtures.h"
#include "oracles.h"

namespace dsrm {
namespace {

using testing::RandomGroups;

SparseVector Dense(std::vector<double> v) {
  std::vector<std::pair<std::uint32_t, double>> e;
  for (std::size_t i = 0; i < v.size(); ++i) e.emplace_back(static_cast<std::uint32_t>(i), v[i]);
  return SparseVector::FromEntries(v.size(), std::move(e));
}

NetworkParams OneDimNet() {
  NetworkParams p = InitParams({1, 1, 1, 1}, 0);
  p.w1(0, 0) = 2.0;
  p.w2(0, 0) = 1.0;
  p.w3(0, 0) = 1.0;
  return p;
}

TEST(InitParams, DeterministicGivenSeed) {
  EXPECT_EQ(InitParams({30, 8, 6, 4}, 9), InitParams({30, 8, 6, 4}, 9));
  EXPECT_NE(InitParams({30, 8, 6, 4}, 9), InitParams({30, 8, 6, 4}, 10));
}

TEST(InitParams, GlorotBoundsAndZeroBiases) {
  const auto p = InitParams({100, 10, 10, 10}, 3);
  const double bound2 = std::sqrt(6.0 / 20.0);
  EXPECT_NEAR(bound2, 0.5477, 1e-4);
  for (double v : p.w2.data()) EXPECT_LE(std::abs(v), bound2);
  const double bound1 = std::sqrt(6.0 / 110.0);
  for (double v : p.w1.data()) EXPECT_LE(std::abs(v), bound1);
  for (double v : p.b2) EXPECT_EQ(v, 0.0);
  for (double v : p.b3) EXPECT_EQ(v, 0.0);
  EXPECT_EQ(p.w1.rows(), 10u);
  EXPECT_EQ(p.w1.cols(), 100u);
  // The draws should fill the interval, not collapse near zero.
  double max_abs = 0.0;
  for (double v : p.w1.data()) max_abs = std::max(max_abs, std::abs(v));
  EXPECT_GT(max_abs, 0.9 * bound1);
}

TEST(InitParams, RejectsZeroSize) {
  EXPECT_THROW(InitParams({0, 1, 1, 1}, 0), std::invalid_argument);
  EXPECT_THROW(InitParams({3, 1, 0, 1}, 0), std::invalid_argument);
}

TEST(Forward, ZeroInputZeroBiasesGivesZero) {
  const auto p = InitParams({12, 5, 5, 4}, 1);
  const auto t = Forward(p, SparseVector(12));
  for (double v : t.y) EXPECT_EQ(v, 0.0);
}

TEST(Forward, OneDimensionalHandValue) {
  const auto t = Forward(OneDimNet(), Dense({0.5}));
  EXPECT_DOUBLE_EQ(t.l1[0], 1.0);
  EXPECT_DOUBLE_EQ(t.l2[0], std::tanh(1.0));
  EXPECT_NEAR(t.y[0], 0.6420, 1e-4);
  EXPECT_DOUBLE_EQ(t.y[0], std::tanh(std::tanh(1.0)));
}

TEST(Forward, LayerEquationsAndBounds) {
  std::mt19937_64 gen(2);
  auto p = InitParams({12, 5, 5, 4}, 4);
  for (double& b : p.b2) b = 0.3;
  for (double& b : p.b3) b = -0.2;
  const auto x = testing::RandomInput(12, gen);
  const auto t = Forward(p, x);
  std::vector<double> dense(12, 0.0);
  for (std::size_t k = 0; k < x.nnz(); ++k) dense[x.indices()[k]] = x.values()[k];
  for (std::size_t r = 0; r < 5; ++r) {
    double s = 0.0;
    for (std::size_t c = 0; c < 12; ++c) s += p.w1(r, c) * dense[c];
    EXPECT_NEAR(t.l1[r], s, 1e-14);
  }
  for (std::size_t r = 0; r < 5; ++r) {
    double s = p.b2[r];
    for (std::size_t c = 0; c < 5; ++c) s += p.w2(r, c) * t.l1[c];
    EXPECT_NEAR(t.l2[r], std::tanh(s), 1e-14);
    EXPECT_LT(std::abs(t.l2[r]), 1.0);
  }
  for (std::size_t r = 0; r < 4; ++r) {
    double s = p.b3[r];
    for (std::size_t c = 0; c < 5; ++c) s += p.w3(r, c) * t.l2[c];
    EXPECT_NEAR(t.y[r], std::tanh(s), 1e-14);
    EXPECT_LT(std::abs(t.y[r]), 1.0);
  }
  const auto again = Forward(p, x);
  EXPECT_EQ(t.y, again.y);
}

TEST(Forward, DimensionMismatchThrows) {
  const auto p = InitParams({12, 5, 5, 4}, 1);
  EXPECT_THROW(Forward(p, SparseVector(11)), DataError);
}

TEST(DsrmRelatedness, SelfAntipodalAndOracle) {
  std::mt19937_64 gen(8);
  const auto p = InitParams({12, 5, 5, 4}, 2);
  const auto x = testing::RandomInput(12, gen);
  EXPECT_NEAR(DsrmRelatedness(p, x, x), 1.0, 1e-15);

  // With zero biases the network is odd: f(-x) = -f(x).
  std::vector<std::pair<std::uint32_t, double>> neg;
  for (std::size_t k = 0; k < x.nnz(); ++k) neg.emplace_back(x.indices()[k], -x.values()[k]);
  EXPECT_NEAR(DsrmRelatedness(p, x, SparseVector::FromEntries(12, neg)), -1.0, 1e-15);

  const auto z = testing::RandomInput(12, gen);
  const auto ya = Forward(p, x).y;
  const auto yb = Forward(p, z).y;
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < ya.size(); ++i) {
    dot += ya[i] * yb[i];
    na += ya[i] * ya[i];
    nb += yb[i] * yb[i];
  }
  EXPECT_NEAR(DsrmRelatedness(p, x, z), dot / std::sqrt(na * nb), 1e-14);
  EXPECT_EQ(DsrmRelatedness(p, x, SparseVector(12)), 0.0);
}

TEST(ScaledSoftmax, Cases) {
  EXPECT_EQ(ScaledSoftmax(std::vector<double>{0.3}, 10.0), (std::vector<double>{1.0}));
  const auto uniform = ScaledSoftmax(std::vector<double>{0.9, -0.1, 0.4}, 0.0);
  for (double p : uniform) EXPECT_DOUBLE_EQ(p, 1.0 / 3.0);
  const auto tie = ScaledSoftmax(std::vector<double>{0.2, 0.2}, 10.0);
  EXPECT_DOUBLE_EQ(tie[0], 0.5);
  EXPECT_DOUBLE_EQ(tie[1], 0.5);
  EXPECT_THROW(ScaledSoftmax(std::vector<double>{}, 1.0), DataError);
}

TEST(ScaledSoftmax, SumsToOneAndShiftInvariant) {
  std::mt19937_64 gen(4);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> s(1 + gen() % 8);
    for (double& v : s) v = u(gen);
    const double gamma = 20.0 * (u(gen) + 1.0);
    const auto p = ScaledSoftmax(s, gamma);
    EXPECT_NEAR(std::accumulate(p.begin(), p.end(), 0.0), 1.0, 1e-12);
    std::vector<double> shifted = s;
    for (double& v : shifted) v += 0.25;
    const auto q = ScaledSoftmax(shifted, gamma);
    for (std::size_t i = 0; i < p.size(); ++i) EXPECT_NEAR(p[i], q[i], 1e-12);
  }
}

TEST(ScaledSoftmax, LargerGammaSharpensArgmax) {
  std::mt19937_64 gen(6);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> s(2 + gen() % 5);
    for (double& v : s) v = u(gen);
    const auto best = static_cast<std::size_t>(std::max_element(s.begin(), s.end()) - s.begin());
    const double g1 = 1.0 + 5.0 * (u(gen) + 1.0);
    EXPECT_LT(ScaledSoftmax(s, g1)[best], ScaledSoftmax(s, g1 + 1.0)[best]);
  }
}

TEST(Loss, GammaZeroIsLogOfCandidateCount) {
  const auto p = InitParams({12, 5, 5, 4}, 1);
  const auto batch = RandomGroups(12, 4, 5, 1);
  EXPECT_NEAR(Loss(p, batch, 0.0), std::log(6.0), 1e-12);
  EXPECT_NEAR(std::log(6.0), 1.7918, 1e-4);
}

TEST(Loss, ConfidentPositiveNearZero) {
  // Negatives are the negated positive, so their cosine to it is -1.
  const auto p = InitParams({12, 5, 5, 4}, 3);
  std::mt19937_64 gen(1);
  const auto x = testing::RandomInput(12, gen);
  std::vector<std::pair<std::uint32_t, double>> neg;
  for (std::size_t k = 0; k < x.nnz(); ++k) neg.emplace_back(x.indices()[k], -x.values()[k]);
  const auto nx = SparseVector::FromEntries(12, neg);
  const std::vector<TrainingGroup> batch = {{x, x, {nx, nx, nx, nx, nx}}};
  EXPECT_LT(Loss(p, batch, 50.0), 1e-3);
}

TEST(Loss, NonNegativeAndEmptyBatchThrows) {
  for (std::uint64_t s = 0; s < 100; ++s) {
    const auto p = InitParams({12, 5, 5, 4}, s);
    EXPECT_GE(Loss(p, RandomGroups(12, 3, 1 + s % 5, s + 100), 10.0), 0.0);
  }
  const auto p = InitParams({12, 5, 5, 4}, 1);
  EXPECT_THROW(Loss(p, std::vector<TrainingGroup>{}, 10.0), DataError);
}

TEST(Posterior, SumsToOne) {
  const auto p = InitParams({12, 5, 5, 4}, 1);
  for (const auto& g : RandomGroups(12, 20, 5, 2)) {
    const auto post = Posterior(p, g, 10.0);
    EXPECT_EQ(post.size(), 6u);
    EXPECT_NEAR(std::accumulate(post.begin(), post.end(), 0.0), 1.0, 1e-12);
  }
}

TEST(Gradients, MatchFiniteDifferences) {
  const auto batch = RandomGroups(12, 3, 5, 21);
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    auto p = InitParams({12, 5, 5, 4}, seed);
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    for (double& b : p.b2) b = u(gen);
    for (double& b : p.b3) b = u(gen);
    const auto report = testing::FiniteDifferenceCheck(p, batch, 10.0);
    EXPECT_EQ(report.coordinates, 12u * 5 + 5 * 5 + 5 + 5 * 4 + 4);
    EXPECT_LE(report.max_relative_error, 1e-4) << "coordinate " << report.worst;
  }
}

TEST(Gradients, TiedCandidatesGiveZero) {
  std::mt19937_64 gen(3);
  const auto x = testing::RandomInput(12, gen);
  const auto y = testing::RandomInput(12, gen);
  const std::vector<TrainingGroup> batch = {{x, y, {y, y, y}}};
  const auto p = InitParams({12, 5, 5, 4}, 7);
  const auto flat = testing::FlattenGradients(p, ComputeGradients(p, batch, 10.0));
  for (double g : flat) EXPECT_NEAR(g, 0.0, 1e-13);
}

TEST(Gradients, DuplicatedBatchUnchanged) {
  const auto batch = RandomGroups(12, 3, 4, 5);
  auto doubled = batch;
  doubled.insert(doubled.end(), batch.begin(), batch.end());
  const auto p = InitParams({12, 5, 5, 4}, 8);
  const auto a = testing::FlattenGradients(p, ComputeGradients(p, batch, 10.0));
  const auto b = testing::FlattenGradients(p, ComputeGradients(p, doubled, 10.0));
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-14);
}

TEST(Gradients, ThreadCountDoesNotChangeBits) {
  const auto batch = RandomGroups(40, 64, 5, 9);
  const auto p = InitParams({40, 8, 8, 6}, 2);
  const auto one = ComputeLossAndGradients(p, batch, 10.0, 1);
  const auto many = ComputeLossAndGradients(p, batch, 10.0, 8);
  EXPECT_EQ(one.loss, many.loss);
  EXPECT_EQ(testing::FlattenGradients(p, one.gradients),
            testing::FlattenGradients(p, many.gradients));
}

TEST(Gradients, SgdStepLowersLoss) {
  const auto batch = RandomGroups(12, 8, 5, 13);
  auto p = InitParams({12, 5, 5, 4}, 5);
  const double before = Loss(p, batch, 10.0);
  ApplySgd(p, ComputeGradients(p, batch, 10.0), 0.01);
  EXPECT_LT(Loss(p, batch, 10.0), before);
}

TEST(Checkpoint, RoundTripIsBitExact) {
  auto p = InitParams({30, 6, 5, 4}, 12);
  p.b2[1] = -0.125;
  std::stringstream buf;
  WriteCheckpoint({p, 7.5}, buf);
  const auto back = ReadCheckpoint(buf);
  EXPECT_EQ(back.params, p);
  EXPECT_EQ(back.gamma, 7.5);
  std::mt19937_64 gen(1);
  const auto x = testing::RandomInput(30, gen);
  EXPECT_EQ(Forward(back.params, x).y, Forward(p, x).y);
}

TEST(Checkpoint, HeaderLayout) {
  const auto p = InitParams({3, 2, 2, 1}, 99);
  std::stringstream buf;
  WriteCheckpoint({p, 10.0}, buf);
  const std::string bytes = buf.str();
  EXPECT_EQ(bytes.substr(0, 8), "DSRMCKPT");
  EXPECT_EQ(static_cast<unsigned char>(bytes[8]), 1u);  // version, little-endian
  const std::size_t header = 8 + 4 + 4 + 4 * 8 + 8 + 8;
  const std::size_t weights = 3 * 2 + 2 * 2 + 2 + 1 * 2 + 1;
  EXPECT_EQ(bytes.size(), header + 8 * weights);
}

TEST(Checkpoint, CorruptInputsRejected) {
  const auto p = InitParams({3, 2, 2, 1}, 1);
  std::stringstream buf;
  WriteCheckpoint({p, 10.0}, buf);
  const std::string good = buf.str();

  std::istringstream magic("XXXXXXXX" + good.substr(8));
  EXPECT_THROW(ReadCheckpoint(magic), DataError);
  std::string version = good;
  version[8] = 2;
  std::istringstream bad_version(version);
  EXPECT_THROW(ReadCheckpoint(bad_version), DataError);
  std::istringstream truncated(good.substr(0, good.size() - 3));
  EXPECT_THROW(ReadCheckpoint(truncated), DataError);
  std::istringstream trailing(good + "x");
  EXPECT_THROW(ReadCheckpoint(trailing), DataError);
  std::string nan = good;
  const double q = std::nan("");
  std::memcpy(&nan[nan.size() - 8], &q, 8);
  std::istringstream non_finite(nan);
  EXPECT_THROW(ReadCheckpoint(non_finite), DataError);
}

}  // namespace
}  // namespace dsrm
