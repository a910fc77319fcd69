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

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <string>

#include <fftw3.h>

#include "crashlens/error.h"

namespace crashlens {
namespace {

// FFTW planning is not thread-safe; execution on distinct plans is.
std::mutex& PlannerMutex() {
  static std::mutex mu;
  return mu;
}

class FftwBuffer {
 public:
  explicit FftwBuffer(std::size_t n)
      : data_(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n))) {
    if (data_ == nullptr) throw Error(ErrorKind::kInternal, "fftw_malloc failed");
  }
  ~FftwBuffer() { fftw_free(data_); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;

  fftw_complex* get() { return data_; }

 private:
  fftw_complex* data_;
};

class FftwPlan {
 public:
  FftwPlan(std::size_t n, fftw_complex* in, fftw_complex* out, int sign) {
    std::lock_guard<std::mutex> lock(PlannerMutex());
    plan_ = fftw_plan_dft_1d(static_cast<int>(n), in, out, sign, FFTW_ESTIMATE);
    if (plan_ == nullptr) throw Error(ErrorKind::kInternal, "fftw planning failed");
  }
  ~FftwPlan() {
    std::lock_guard<std::mutex> lock(PlannerMutex());
    fftw_destroy_plan(plan_);
  }
  FftwPlan(const FftwPlan&) = delete;
  FftwPlan& operator=(const FftwPlan&) = delete;

  void Execute() { fftw_execute(plan_); }

 private:
  fftw_plan plan_ = nullptr;
};

}  // namespace

std::vector<double> UnwrapPhase(std::span<const double> wrapped) {
  constexpr double kPi = std::numbers::pi;
  std::vector<double> out(wrapped.begin(), wrapped.end());
  double offset = 0.0;
  for (std::size_t i = 1; i < wrapped.size(); ++i) {
    double jump = wrapped[i] - wrapped[i - 1];
    // Bring the jump into (-pi, pi].
    double k = std::ceil((jump - kPi) / (2.0 * kPi));
    offset -= 2.0 * kPi * k;
    out[i] = wrapped[i] + offset;
  }
  return out;
}

AnalyticSignal AnalyticSignalOf(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n < 8) {
    throw Error(ErrorKind::kInsufficientData, "analytic signal needs at least 8 samples");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(x[i])) {
      throw Error(ErrorKind::kData, "non-finite sample at " + std::to_string(i));
    }
  }

  AnalyticSignal out;
  out.values.resize(n);
  out.amplitude.assign(n, 0.0);
  out.phase.assign(n, 0.0);
  out.frequency.assign(n - 1, 0.0);

  bool constant = true;
  for (std::size_t i = 1; i < n && constant; ++i) constant = x[i] == x[0];
  if (constant) {
    // No oscillation: the analytic signal is the constant itself.
    out.degenerate = true;
    for (std::size_t i = 0; i < n; ++i) {
      out.values[i] = {x[i], 0.0};
      out.amplitude[i] = std::abs(x[i]);
    }
    return out;
  }

  FftwBuffer buf(n);
  FftwPlan forward(n, buf.get(), buf.get(), FFTW_FORWARD);
  FftwPlan backward(n, buf.get(), buf.get(), FFTW_BACKWARD);
  for (std::size_t i = 0; i < n; ++i) {
    buf.get()[i][0] = x[i];
    buf.get()[i][1] = 0.0;
  }
  forward.Execute();
  // Keep DC (and Nyquist for even n), double positive, zero negative.
  const std::size_t half = n / 2;
  const std::size_t last_positive = n % 2 == 0 ? half - 1 : half;
  for (std::size_t k = 1; k <= last_positive; ++k) {
    buf.get()[k][0] *= 2.0;
    buf.get()[k][1] *= 2.0;
  }
  for (std::size_t k = half + 1; k < n; ++k) {
    buf.get()[k][0] = 0.0;
    buf.get()[k][1] = 0.0;
  }
  backward.Execute();

  const double scale = 1.0 / static_cast<double>(n);
  std::vector<double> wrapped(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.values[i] = {buf.get()[i][0] * scale, buf.get()[i][1] * scale};
    out.amplitude[i] = std::abs(out.values[i]);
    wrapped[i] = std::arg(out.values[i]);
  }
  out.phase = UnwrapPhase(wrapped);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    out.frequency[i] = out.phase[i + 1] - out.phase[i];
  }
  return out;
}

double EllipticAngle(double rho) {
  constexpr double kSlack = 1e-12;
  if (!std::isfinite(rho) || std::abs(rho) > 1.0 + kSlack) {
    throw Error(ErrorKind::kDomain,
                "correlation " + std::to_string(rho) + " outside [-1, 1]");
  }
  return std::acos(std::clamp(rho, -1.0, 1.0));
}

std::complex<double> HyperbolicAngle(double rho) {
  if (!std::isfinite(rho)) {
    throw Error(ErrorKind::kDomain, "hyperbolic angle of non-finite value");
  }
  return std::acosh(std::complex<double>(rho, 0.0));
}

}  // namespace crashlens
