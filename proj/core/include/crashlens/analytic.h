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

#ifndef CRASHLENS_ANALYTIC_H_
#define CRASHLENS_ANALYTIC_H_

#include <complex>
#include <span>
#include <vector>

namespace crashlens {

struct AnalyticSignal {
  std::vector<std::complex<double>> values;
  std::vector<double> amplitude;
  std::vector<double> phase;      // unwrapped, radians
  std::vector<double> frequency;  // radians per sample, size n - 1
  // Input has no oscillation (all samples equal, including all zero).
  bool degenerate = false;
};

// Analytic signal via one-sided spectrum: negative frequencies zeroed,
// positive doubled, DC and Nyquist kept. Requires n >= 8 finite samples.
AnalyticSignal AnalyticSignalOf(std::span<const double> x);

// Unwraps so that successive differences lie in (-pi, pi].
std::vector<double> UnwrapPhase(std::span<const double> wrapped);

// arccos(rho) in [0, pi]. Accepts |rho| <= 1 + 1e-12 (clamped), otherwise
// throws kDomain.
double EllipticAngle(double rho);

// Principal complex arccosh. Purely imaginary, i*arccos(rho), on [-1, 1];
// real for rho >= 1.
std::complex<double> HyperbolicAngle(double rho);

}  // namespace crashlens

#endif  // CRASHLENS_ANALYTIC_H_
