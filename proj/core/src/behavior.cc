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

#include <array>
#include <cmath>
#include <numbers>

#include "crashlens/error.h"

namespace crashlens {
namespace {

using cd = std::complex<double>;
constexpr double kPi = std::numbers::pi;
constexpr double kQuarter = kPi / 2.0;

Eigen::Matrix2cd SigmaX() {
  Eigen::Matrix2cd m;
  m << cd(0, 0), cd(1, 0), cd(1, 0), cd(0, 0);
  return m;
}

// (theta quadrant, gamma quadrant) per state, quadrant q covering
// (q * pi/2, (q + 1) * pi/2).
constexpr std::array<std::array<int, 2>, 8> kStateQuadrants = {{
    {0, 0},  // State1
    {0, 3},  // State2
    {2, 2},  // State3
    {2, 1},  // State4
    {3, 0},  // State5
    {3, 3},  // State6
    {1, 2},  // State7
    {1, 1},  // State8
}};

double ReduceAngle(double a) {
  double r = std::fmod(a, 2.0 * kPi);
  if (r < 0.0) r += 2.0 * kPi;
  if (r >= 2.0 * kPi) r = 0.0;
  return r;
}

}  // namespace

BehaviorMatrix Pauli(PauliAxis axis) {
  BehaviorMatrix b;
  switch (axis) {
    case PauliAxis::kX:
      b.value = SigmaX();
      break;
    case PauliAxis::kY:
      b.value << cd(0, 0), cd(0, -1), cd(0, 1), cd(0, 0);
      break;
    case PauliAxis::kZ:
      b.value << cd(1, 0), cd(0, 0), cd(0, 0), cd(-1, 0);
      break;
  }
  return b;
}

BehaviorMatrix WilsonLoop(const BehaviorMatrix& m) {
  const Eigen::Matrix2cd x = SigmaX();
  return BehaviorMatrix{x * m.value * x, m.role};
}

BehaviorMatrix Commutator(const BehaviorMatrix& a, const BehaviorMatrix& b) {
  return BehaviorMatrix{a.value * b.value - b.value * a.value, TraderRole::kGeneric};
}

BehaviorMatrix NoiseTrader() {
  BehaviorMatrix b = Pauli(PauliAxis::kY);
  b.role = TraderRole::kNoise;
  return b;
}

BehaviorMatrix FundamentalistTrader() {
  BehaviorMatrix b = WilsonLoop(Pauli(PauliAxis::kZ));
  b.value = -b.value;
  b.role = TraderRole::kFundamentalist;
  return b;
}

AngleBox StateBox(MarketState state) {
  const int k = static_cast<int>(state);
  if (k < 1 || k > 8) {
    throw Error(ErrorKind::kUsage, "unclassified state has no angle box");
  }
  const auto& q = kStateQuadrants[static_cast<std::size_t>(k - 1)];
  return AngleBox{q[0] * kQuarter, (q[0] + 1) * kQuarter, q[1] * kQuarter,
                  (q[1] + 1) * kQuarter};
}

MarketState ClassifyState(double theta, double gamma) {
  if (!std::isfinite(theta) || !std::isfinite(gamma)) {
    throw Error(ErrorKind::kDomain, "state angles must be finite");
  }
  const double t = ReduceAngle(theta);
  const double g = ReduceAngle(gamma);
  for (int k = 1; k <= 8; ++k) {
    const AngleBox box = StateBox(static_cast<MarketState>(k));
    if (t > box.theta_lo && t < box.theta_hi && g > box.gamma_lo && g < box.gamma_hi) {
      return static_cast<MarketState>(k);
    }
  }
  return MarketState::kUnclassified;
}

}  // namespace crashlens
