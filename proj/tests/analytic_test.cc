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

#include "crashlens/analytic.h"

#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "crashlens/error.h"
#include "oracles.h"

namespace crashlens {
namespace {

constexpr double kPi = std::numbers::pi;

TEST(AnalyticSignal, MatchesNaiveDft) {
  for (std::size_t n : {16u, 17u, 64u, 101u}) {
    const std::vector<double> x = oracle::RandomWalk(n, n);
    const AnalyticSignal a = AnalyticSignalOf(x);
    const auto ref = oracle::NaiveAnalytic(x);
    for (std::size_t t = 0; t < n; ++t) {
      EXPECT_NEAR(a.values[t].real(), ref[t].real(), 1e-9) << n << " " << t;
      EXPECT_NEAR(a.values[t].imag(), ref[t].imag(), 1e-9) << n << " " << t;
      EXPECT_NEAR(a.amplitude[t], std::abs(ref[t]), 1e-9);
    }
  }
}

TEST(AnalyticSignal, RealPartIsInput) {
  const std::vector<double> x = oracle::RandomWalk(50, 5);
  const AnalyticSignal a = AnalyticSignalOf(x);
  for (std::size_t t = 0; t < x.size(); ++t) EXPECT_NEAR(a.values[t].real(), x[t], 1e-10);
}

TEST(AnalyticSignal, CosineFrequency) {
  std::vector<double> x(256);
  for (std::size_t t = 0; t < x.size(); ++t) x[t] = std::cos(2 * kPi * t / 16.0);
  const AnalyticSignal a = AnalyticSignalOf(x);
  ASSERT_EQ(a.frequency.size(), 255u);
  for (std::size_t t = 26; t < 230; ++t) {
    EXPECT_LE(std::abs(a.frequency[t] - 2 * kPi / 16) / (2 * kPi / 16), 0.02) << t;
  }
  EXPECT_FALSE(a.degenerate);
}

TEST(AnalyticSignal, ConstantIsDegenerate) {
  for (double c : {0.0, 3.5}) {
    const AnalyticSignal a = AnalyticSignalOf(std::vector<double>(32, c));
    EXPECT_TRUE(a.degenerate);
    for (double f : a.frequency) EXPECT_EQ(f, 0.0);
    for (double p : a.phase) EXPECT_EQ(p, 0.0);
  }
}

TEST(AnalyticSignal, ChirpFrequencyRises) {
  const std::size_t n = 1024;
  std::vector<double> x(n);
  for (std::size_t t = 0; t < n; ++t) {
    const double u = static_cast<double>(t) / 256.0;
    x[t] = std::cos(2 * kPi * u * u * 8);
  }
  const AnalyticSignal a = AnalyticSignalOf(x);
  std::vector<double> smooth;
  for (std::size_t t = 2; t + 2 < a.frequency.size(); ++t) {
    double s = 0;
    for (std::size_t k = t - 2; k <= t + 2; ++k) s += a.frequency[k];
    smooth.push_back(s / 5);
  }
  // smooth[i] is centred on sample i + 2.
  for (std::size_t t = 103; t < 921; ++t) EXPECT_LT(smooth[t - 3], smooth[t - 2]) << t;
}

TEST(AnalyticSignal, ChirpTracksTrueFrequency) {
  // True instantaneous frequency of the chirp is 2 pi t / 4096 per sample.
  const std::size_t n = 1024;
  std::vector<double> x(n);
  for (std::size_t t = 0; t < n; ++t) {
    const double u = static_cast<double>(t) / 256.0;
    x[t] = std::cos(2 * kPi * u * u * 8);
  }
  const AnalyticSignal a = AnalyticSignalOf(x);
  double prev = 0;
  for (std::size_t block = 0; block < 20; ++block) {
    double mean = 0;
    for (std::size_t t = 102 + 41 * block; t < 143 + 41 * block; ++t) {
      const double truth = 2 * kPi * (static_cast<double>(t) + 0.5) / 4096;
      EXPECT_LE(std::abs(a.frequency[t] - truth) / truth, 0.07) << t;
      mean += a.frequency[t] / 41;
    }
    EXPECT_GT(mean, prev) << block;
    prev = mean;
  }
}

TEST(AnalyticSignal, ShortInputRejected) {
  EXPECT_THROW(AnalyticSignalOf(std::vector<double>(7, 1.0)), Error);
}

TEST(UnwrapPhase, StepsStayInHalfOpenInterval) {
  const std::vector<double> w = {3.0, -3.0, 3.0, -3.1, 0.0};
  const std::vector<double> u = UnwrapPhase(w);
  for (std::size_t i = 1; i < u.size(); ++i) {
    const double d = u[i] - u[i - 1];
    EXPECT_GT(d, -kPi);
    EXPECT_LE(d, kPi);
    EXPECT_NEAR(std::remainder(u[i] - w[i], 2 * kPi), 0.0, 1e-12);
  }
}

TEST(EllipticAngle, KnownValues) {
  EXPECT_EQ(EllipticAngle(1.0), 0.0);
  EXPECT_NEAR(EllipticAngle(0.0), kPi / 2, 1e-15);
  EXPECT_NEAR(EllipticAngle(-1.0), kPi, 1e-15);
  EXPECT_EQ(EllipticAngle(1.0 + 1e-13), 0.0);
  try {
    EllipticAngle(1.0 + 1e-9);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kDomain);
  }
}

TEST(HyperbolicAngle, KnownValues) {
  EXPECT_NEAR(std::abs(HyperbolicAngle(1.0)), 0.0, 1e-15);
  const auto h = HyperbolicAngle(std::cosh(0.5));
  EXPECT_NEAR(h.real(), 0.5, 1e-12);
  EXPECT_NEAR(h.imag(), 0.0, 1e-12);
  const auto z = HyperbolicAngle(0.0);
  EXPECT_NEAR(z.real(), 0.0, 1e-15);
  EXPECT_NEAR(z.imag(), kPi / 2, 1e-15);
}

TEST(HyperbolicAngle, EllipticRelation) {
  for (double rho = -1.0; rho <= 1.0; rho += 0.125) {
    EXPECT_NEAR(HyperbolicAngle(rho).imag(), EllipticAngle(rho), 1e-12) << rho;
  }
}

}  // namespace
}  // namespace crashlens
