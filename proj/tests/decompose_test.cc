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

#include "crashlens/decompose.h"

#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "crashlens/error.h"
#include "oracles.h"

namespace crashlens {
namespace {

constexpr double kTau = 2.0 * std::numbers::pi;

Series Tone(std::size_t n, double period, double phase = 0.0) {
  Series x(n);
  for (std::size_t t = 0; t < n; ++t) x[t] = std::sin(kTau * static_cast<double>(t) / period + phase);
  return x;
}

Series Ramp(std::size_t n) {
  Series x(n);
  for (std::size_t t = 0; t < n; ++t) x[t] = static_cast<double>(t);
  return x;
}

double CentralCorrelation(const Series& a, const Series& b) {
  const std::size_t lo = a.size() / 10, hi = a.size() - lo;
  return oracle::Pearson({a.begin() + lo, a.begin() + hi}, {b.begin() + lo, b.begin() + hi});
}

TEST(FindExtrema, PlateausAndEnds) {
  const Series x = {0, 1, 1, 0, -1, -1, 0, 2};
  const Extrema e = FindExtrema(x);
  EXPECT_EQ(e.maxima, (std::vector<std::size_t>{1}));
  EXPECT_EQ(e.minima, (std::vector<std::size_t>{4}));
  EXPECT_EQ(CountZeroCrossings(Series{1, -1, 0, 2, -3}), 3u);
}

TEST(NaturalCubicSpline, TwoKnotsIsLine) {
  const Series s = NaturalCubicSpline(std::vector<double>{0, 4}, std::vector<double>{1, 9}, 5);
  for (std::size_t t = 0; t < 5; ++t) EXPECT_NEAR(s[t], 1 + 2.0 * static_cast<double>(t), 1e-12);
}

TEST(NaturalCubicSpline, InterpolatesKnots) {
  const std::vector<double> k = {0, 3, 7, 12}, v = {1, -2, 5, 0};
  const Series s = NaturalCubicSpline(k, v, 13);
  for (std::size_t i = 0; i < k.size(); ++i) EXPECT_NEAR(s[static_cast<std::size_t>(k[i])], v[i], 1e-12);
}

TEST(Emd, RampHasNoModes) {
  const Series x = Ramp(100);
  const ModeDecomposition d = Emd(x);
  EXPECT_EQ(d.size(), 0u);
  EXPECT_EQ(d.residual, x);
}

TEST(Emd, SingleTone) {
  const Series x = Tone(256, 32);
  const ModeDecomposition d = Emd(x);
  ASSERT_EQ(d.size(), 1u);
  EXPECT_LE(oracle::RelativeL2(d.modes[0], x), 0.05);
  double rn = 0, xn = 0;
  for (std::size_t t = 0; t < x.size(); ++t) {
    rn += d.residual[t] * d.residual[t];
    xn += x[t] * x[t];
  }
  EXPECT_LE(std::sqrt(rn / xn), 0.05);
}

TEST(Emd, TwoTonesSeparate) {
  const Series fast = Tone(1024, 16), slow = Tone(1024, 128);
  Series x(1024);
  for (std::size_t t = 0; t < x.size(); ++t) x[t] = fast[t] + slow[t];
  const ModeDecomposition d = Emd(x);
  ASSERT_GE(d.size(), 2u);
  EXPECT_LE(oracle::RelativeL2(d.modes[0], fast, 102, 922), 0.1);
  EXPECT_LE(oracle::RelativeL2(d.modes[1], slow, 102, 922), 0.1);
}

TEST(Emd, RejectsNonFiniteAndShortInput) {
  Series x = Tone(64, 8);
  x[10] = std::nan("");
  EXPECT_THROW(Emd(x), Error);
  EXPECT_THROW(Emd(Series{1, 2, 1}), Error);
}

TEST(Emd, ReconstructsRandomWalks) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Series x = oracle::RandomWalk(512, seed);
    EXPECT_LE(oracle::RelativeL2(Reconstruct(Emd(x)), x), 1e-9) << "seed " << seed;
  }
}

TEST(Emd, ModesAreImfShaped) {
  const Series x = oracle::RandomWalk(512, 77);
  const ModeDecomposition d = Emd(x);
  ASSERT_GE(d.size(), 1u);
  // The first modes converge on the shape test; later ones may stop on the
  // iteration cap.
  EXPECT_TRUE(HasImfShape(d.modes[0]));
}

TEST(Itd, MonotoneHasNoRotations) {
  const Series x = Ramp(64);
  const ModeDecomposition d = Itd(x);
  EXPECT_EQ(d.size(), 0u);
  EXPECT_EQ(d.residual, x);
}

TEST(Itd, FirstRotationFollowsTone) {
  const Series x = Tone(256, 32);
  const ModeDecomposition d = Itd(x);
  ASSERT_GE(d.size(), 1u);
  EXPECT_GE(CentralCorrelation(d.modes[0], x), 0.95);
}

TEST(Itd, ReconstructsRandomWalks) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Series x = oracle::RandomWalk(512, seed);
    const ModeDecomposition d = Itd(x);
    EXPECT_EQ(d.method, DecompositionMethod::kItd);
    EXPECT_LE(oracle::RelativeL2(Reconstruct(d), x), 1e-9) << "seed " << seed;
  }
}

TEST(ItdImfChain, MonotoneGivesZeros) {
  const Series y = ItdImfChain(Ramp(64), 3);
  for (double v : y) EXPECT_EQ(v, 0.0);
}

TEST(ItdImfChain, ToneSurvives) {
  const Series x = Tone(256, 32);
  EXPECT_GE(CentralCorrelation(ItdImfChain(x, 1), x), 0.9);
}

TEST(ItdImfChain, AllImfsIsRotationMinusResidual) {
  const Series x = oracle::RandomWalk(400, 9);
  const Series pr1 = Itd(x).modes.at(0);
  const ModeDecomposition e = Emd(pr1);
  const Series y = ItdImfChain(x, static_cast<int>(e.size()) + 5);
  for (std::size_t t = 0; t < x.size(); ++t) {
    EXPECT_NEAR(y[t], pr1[t] - e.residual[t], 1e-9 * (1 + std::abs(pr1[t])));
  }
}

TEST(Reconstruct, NoModesIsResidual) {
  ModeDecomposition d;
  d.residual = {1, 2, 3};
  EXPECT_EQ(Reconstruct(d), d.residual);
}

TEST(DecompositionCsv, HeaderNamesModes) {
  const std::string csv = DecompositionCsv(Itd(Tone(64, 8)));
  EXPECT_EQ(csv.rfind("rotation1,", 0), 0u) << csv.substr(0, 40);
  EXPECT_NE(csv.find("residual\n"), std::string::npos);
}

TEST(Determinism, EmdIsBitIdentical) {
  const Series x = oracle::RandomWalk(300, 3);
  const ModeDecomposition a = Emd(x), b = Emd(x);
  EXPECT_EQ(a.modes, b.modes);
  EXPECT_EQ(a.residual, b.residual);
}

}  // namespace
}  // namespace crashlens
