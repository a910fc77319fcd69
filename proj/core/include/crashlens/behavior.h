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

#ifndef CRASHLENS_BEHAVIOR_H_
#define CRASHLENS_BEHAVIOR_H_

#include <string_view>

#include <Eigen/Core>

namespace crashlens {

enum class TraderRole { kNoise, kFundamentalist, kBias, kGeneric };

// 2x2 complex matrix acting on the (peak, trough) state pair. Rows are the
// predictor state, columns the predictant state.
struct BehaviorMatrix {
  Eigen::Matrix2cd value = Eigen::Matrix2cd::Zero();
  TraderRole role = TraderRole::kGeneric;
};

enum class PauliAxis { kX, kY, kZ };

BehaviorMatrix Pauli(PauliAxis axis);

// Swap of the two basis states: W(M) = sigma_x M sigma_x. Involutive and
// determinant preserving.
BehaviorMatrix WilsonLoop(const BehaviorMatrix& m);

// AB - BA, role kGeneric.
BehaviorMatrix Commutator(const BehaviorMatrix& a, const BehaviorMatrix& b);

// Noise trader, sigma_y.
BehaviorMatrix NoiseTrader();
// Fundamentalist, -W(sigma_z).
BehaviorMatrix FundamentalistTrader();

// State1..State8 or kUnclassified (0).
enum class MarketState : int {
  kUnclassified = 0,
  kState1 = 1,
  kState2,
  kState3,
  kState4,
  kState5,
  kState6,
  kState7,
  kState8,
};

struct AngleBox {
  double theta_lo, theta_hi;
  double gamma_lo, gamma_hi;
};

// Open (theta, gamma) box of a state; kUnclassified has none.
AngleBox StateBox(MarketState state);

// Angles are reduced mod 2 pi first. Points on a box boundary and the eight
// quadrant pairs no state covers are kUnclassified. Throws kDomain on
// non-finite input.
MarketState ClassifyState(double theta, double gamma);

}  // namespace crashlens

#endif  // CRASHLENS_BEHAVIOR_H_
