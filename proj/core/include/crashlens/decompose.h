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

#ifndef CRASHLENS_DECOMPOSE_H_
#define CRASHLENS_DECOMPOSE_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace crashlens {

using Series = std::vector<double>;

enum class DecompositionMethod { kEmd, kItd };

// Ordered components of one series, highest frequency first. For EMD the
// modes are IMFs; for ITD they are proper rotations and the residual is the
// final baseline. Sum of modes plus residual reproduces the input.
struct ModeDecomposition {
  std::vector<Series> modes;
  Series residual;
  DecompositionMethod method = DecompositionMethod::kEmd;

  std::size_t size() const { return modes.size(); }
};

struct SiftConfig {
  int max_modes = 10;
  int max_sift_iterations = 100;
  // Cauchy criterion: sum((h_prev - h)^2) / sum(h_prev^2).
  double sd_threshold = 0.2;
  // Extrema mirrored at each end before envelope interpolation.
  int mirror_extrema = 2;

  void Validate() const;
};

// Indices of strict local maxima and minima (plateaus report their first
// sample). End points are never extrema.
struct Extrema {
  std::vector<std::size_t> maxima;
  std::vector<std::size_t> minima;

  std::size_t count() const { return maxima.size() + minima.size(); }
};

Extrema FindExtrema(std::span<const double> x);
std::size_t CountZeroCrossings(std::span<const double> x);

// True when extrema and zero-crossing counts differ by at most `slack`.
bool HasImfShape(std::span<const double> x, std::size_t slack = 1);

// Natural cubic spline through (knots[i], values[i]) evaluated at 0..n-1.
// Knots must be strictly increasing; two knots give a straight line.
Series NaturalCubicSpline(std::span<const double> knots,
                          std::span<const double> values, std::size_t n);

ModeDecomposition Emd(std::span<const double> x, const SiftConfig& cfg = {});

// Intrinsic time-scale decomposition with baseline mixing 0.5.
ModeDecomposition Itd(std::span<const double> x, int max_levels = 10);

// ITD first proper rotation of x, then EMD of that rotation; returns the sum
// of its first min(n, available) IMFs. All zeros when x has no rotation.
Series ItdImfChain(std::span<const double> x, int n, const SiftConfig& cfg = {});

Series Reconstruct(const ModeDecomposition& d);

// One column per mode then a `residual` column.
std::string DecompositionCsv(const ModeDecomposition& d);

}  // namespace crashlens

#endif  // CRASHLENS_DECOMPOSE_H_
