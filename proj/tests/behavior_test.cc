// Copyright 2026 The Crashlens Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "crashlens/behavior.h"

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include <Eigen/LU>
#include <gtest/gtest.h>

#include "crashlens/error.h"

namespace crashlens {
namespace {

using cd = std::complex<double>;
constexpr double kPi = std::numbers::pi;
const cd kI(0.0, 1.0);

Eigen::Matrix2cd M(cd a, cd b, cd c, cd d) {
  Eigen::Matrix2cd m;
  m << a, b, c, d;
  return m;
}

Eigen::Matrix2cd RandomMatrix(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  return M({g(rng), g(rng)}, {g(rng), g(rng)}, {g(rng), g(rng)}, {g(rng), g(rng)});
}

TEST(Pauli, Matrices) {
  EXPECT_EQ(Pauli(PauliAxis::kX).value, M(0, 1, 1, 0));
  EXPECT_EQ(Pauli(PauliAxis::kY).value, M(0, -kI, kI, 0));
  EXPECT_EQ(Pauli(PauliAxis::kZ).value, M(1, 0, 0, -1));
  for (auto a : {PauliAxis::kX, PauliAxis::kY, PauliAxis::kZ}) {
    const Eigen::Matrix2cd s = Pauli(a).value;
    EXPECT_TRUE((s * s).isApprox(Eigen::Matrix2cd::Identity()));
    EXPECT_EQ(s.trace(), cd(0));
  }
}

TEST(Traders, NoiseAndFundamentalist) {
  EXPECT_EQ(NoiseTrader().value, Pauli(PauliAxis::kY).value);
  EXPECT_EQ(NoiseTrader().role, TraderRole::kNoise);
  EXPECT_EQ(WilsonLoop(Pauli(PauliAxis::kZ)).value, -Pauli(PauliAxis::kZ).value);
  EXPECT_EQ(FundamentalistTrader().value, Pauli(PauliAxis::kZ).value);
  EXPECT_EQ(FundamentalistTrader().role, TraderRole::kFundamentalist);
}

TEST(WilsonLoop, InvolutionAndDeterminant) {
  std::mt19937_64 rng(64);
  for (int i = 0; i < 100; ++i) {
    const BehaviorMatrix m{RandomMatrix(rng)};
    const BehaviorMatrix w = WilsonLoop(m);
    EXPECT_LE((WilsonLoop(w).value - m.value).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LE(std::abs(w.value.determinant() - m.value.determinant()), 1e-12);
  }
  const BehaviorMatrix id{Eigen::Matrix2cd::Identity()};
  EXPECT_EQ(WilsonLoop(id).value, id.value);
}

TEST(Commutator, PauliRelations) {
  const auto x = Pauli(PauliAxis::kX), y = Pauli(PauliAxis::kY), z = Pauli(PauliAxis::kZ);
  EXPECT_EQ(Commutator(y, z).value, 2.0 * kI * x.value);
  EXPECT_EQ(Commutator(x, y).value, 2.0 * kI * z.value);
  std::mt19937_64 rng(3);
  const BehaviorMatrix m{RandomMatrix(rng)};
  EXPECT_TRUE(Commutator(m, m).value.isZero());
}

TEST(ClassifyState, Examples) {
  EXPECT_EQ(ClassifyState(kPi / 4, kPi / 4), MarketState::kState1);
  EXPECT_EQ(ClassifyState(kPi / 4, 7 * kPi / 4), MarketState::kState2);
  EXPECT_EQ(ClassifyState(kPi / 4, 3 * kPi / 4), MarketState::kUnclassified);
  // Reduced mod 2 pi.
  EXPECT_EQ(ClassifyState(kPi / 4 + 2 * kPi, -kPi / 4), MarketState::kState2);
  EXPECT_EQ(ClassifyState(kPi / 2, kPi / 4), MarketState::kUnclassified);
  EXPECT_THROW(ClassifyState(std::nan(""), 0.0), Error);
}

TEST(ClassifyState, BoxesAreDisjoint) {
  int classified = 0;
  for (int a = 0; a < 128; ++a) {
    for (int b = 0; b < 128; ++b) {
      const double t = (a + 0.5) * kPi / 64, g = (b + 0.5) * kPi / 64;
      int hits = 0;
      for (int k = 1; k <= 8; ++k) {
        const AngleBox box = StateBox(static_cast<MarketState>(k));
        hits += t > box.theta_lo && t < box.theta_hi && g > box.gamma_lo && g < box.gamma_hi;
      }
      EXPECT_LE(hits, 1);
      const MarketState s = ClassifyState(t, g);
      EXPECT_EQ(s != MarketState::kUnclassified, hits == 1);
      classified += hits;
    }
  }
  // Eight of the sixteen quadrant pairs.
  EXPECT_EQ(classified, 128 * 128 / 2);
}

}  // namespace
}  // namespace crashlens
