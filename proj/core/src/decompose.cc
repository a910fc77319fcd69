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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <string>

#include "crashlens/error.h"

namespace crashlens {
namespace {

constexpr double kItdMixing = 0.5;

void RequireFinite(std::span<const double> x, const char* what) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i])) {
      throw Error(ErrorKind::kData, std::string(what) + ": non-finite sample at " +
                                        std::to_string(i));
    }
  }
}

using Index = std::vector<std::size_t>;

// Elements [from, to) of v (bounds clipped), reversed.
Index FlipRange(const Index& v, std::ptrdiff_t from, std::ptrdiff_t to) {
  const auto size = static_cast<std::ptrdiff_t>(v.size());
  from = std::clamp<std::ptrdiff_t>(from, 0, size);
  to = std::clamp<std::ptrdiff_t>(to, 0, size);
  Index out;
  for (std::ptrdiff_t i = to - 1; i >= from; --i) {
    out.push_back(v[static_cast<std::size_t>(i)]);
  }
  return out;
}

struct Knots {
  std::vector<double> t;
  std::vector<double> z;
};

void AppendMirrored(Knots& k, const Index& idx, std::size_t axis,
                    std::span<const double> x) {
  for (std::size_t i : idx) {
    k.t.push_back(2.0 * static_cast<double>(axis) - static_cast<double>(i));
    k.z.push_back(x[i]);
  }
}

void SortUnique(Knots& k) {
  std::vector<std::size_t> order(k.t.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return k.t[a] < k.t[b]; });
  Knots out;
  for (std::size_t i : order) {
    if (!out.t.empty() && k.t[i] <= out.t.back()) continue;
    out.t.push_back(k.t[i]);
    out.z.push_back(k.z[i]);
  }
  k = std::move(out);
}

bool LeftShort(const std::vector<double>& tl) { return tl.empty() || tl.front() > 0.0; }
bool RightShort(const std::vector<double>& tr, double last) {
  return tr.empty() || tr.back() < last;
}

std::vector<double> MirrorTimes(const Index& idx, std::size_t axis) {
  std::vector<double> out;
  for (std::size_t i : idx) {
    out.push_back(2.0 * static_cast<double>(axis) - static_cast<double>(i));
  }
  return out;
}

// Envelope knots with `nbsym` extrema of each kind mirrored past both ends.
// The mirror axis is the outermost extremum, or the end sample itself when
// the end lies beyond the neighbouring extremum of the opposite kind.
void BoundaryKnots(const Extrema& e, std::span<const double> x, int nbsym,
                   Knots& upper, Knots& lower) {
  const Index& imax = e.maxima;
  const Index& imin = e.minima;
  const auto M = static_cast<std::ptrdiff_t>(imax.size());
  const auto N = static_cast<std::ptrdiff_t>(imin.size());
  const std::size_t lx = x.size() - 1;
  const auto nb = static_cast<std::ptrdiff_t>(nbsym);

  Index lmax, lmin, rmax, rmin;
  std::size_t lsym = 0, rsym = lx;

  if (imax.front() < imin.front()) {
    if (x[0] > x[imin.front()]) {
      lmax = FlipRange(imax, 1, nb + 1);
      lmin = FlipRange(imin, 0, nb);
      lsym = imax.front();
    } else {
      lmax = FlipRange(imax, 0, nb);
      lmin = FlipRange(imin, 0, nb - 1);
      lmin.push_back(0);
      lsym = 0;
    }
  } else {
    if (x[0] < x[imax.front()]) {
      lmax = FlipRange(imax, 0, nb);
      lmin = FlipRange(imin, 1, nb + 1);
      lsym = imin.front();
    } else {
      lmax = FlipRange(imax, 0, nb - 1);
      lmax.push_back(0);
      lmin = FlipRange(imin, 0, nb);
      lsym = 0;
    }
  }

  if (imax.back() < imin.back()) {
    if (x[lx] < x[imax.back()]) {
      rmax = FlipRange(imax, M - nb, M);
      rmin = FlipRange(imin, N - nb - 1, N - 1);
      rsym = imin.back();
    } else {
      rmax = {lx};
      for (std::size_t i : FlipRange(imax, M - nb + 1, M)) rmax.push_back(i);
      rmin = FlipRange(imin, N - nb, N);
      rsym = lx;
    }
  } else {
    if (x[lx] > x[imin.back()]) {
      rmax = FlipRange(imax, M - nb - 1, M - 1);
      rmin = FlipRange(imin, N - nb, N);
      rsym = imax.back();
    } else {
      rmax = FlipRange(imax, M - nb, M);
      rmin = {lx};
      for (std::size_t i : FlipRange(imin, N - nb + 1, N)) rmin.push_back(i);
      rsym = lx;
    }
  }

  // Mirroring about an inner extremum may not reach past the end; fall back
  // to mirroring about the end sample.
  if (LeftShort(MirrorTimes(lmin, lsym)) || LeftShort(MirrorTimes(lmax, lsym))) {
    if (lsym != 0) {
      if (lsym == imax.front()) {
        lmax = FlipRange(imax, 0, nb);
      } else {
        lmin = FlipRange(imin, 0, nb);
      }
      lsym = 0;
    }
  }
  const double last = static_cast<double>(lx);
  if (RightShort(MirrorTimes(rmin, rsym), last) ||
      RightShort(MirrorTimes(rmax, rsym), last)) {
    if (rsym != lx) {
      if (rsym == imax.back()) {
        rmax = FlipRange(imax, M - nb, M);
      } else {
        rmin = FlipRange(imin, N - nb, N);
      }
      rsym = lx;
    }
  }

  upper = {};
  lower = {};
  AppendMirrored(upper, lmax, lsym, x);
  for (std::size_t i : imax) {
    upper.t.push_back(static_cast<double>(i));
    upper.z.push_back(x[i]);
  }
  AppendMirrored(upper, rmax, rsym, x);
  AppendMirrored(lower, lmin, lsym, x);
  for (std::size_t i : imin) {
    lower.t.push_back(static_cast<double>(i));
    lower.z.push_back(x[i]);
  }
  AppendMirrored(lower, rmin, rsym, x);
  SortUnique(upper);
  SortUnique(lower);
}

double SumSquares(std::span<const double> x) {
  return std::inner_product(x.begin(), x.end(), x.begin(), 0.0);
}

}  // namespace

void SiftConfig::Validate() const {
  if (max_modes < 1 || max_sift_iterations < 1 || mirror_extrema < 1) {
    throw Error(ErrorKind::kUsage, "sift limits must be positive");
  }
  if (!(sd_threshold > 0.0 && sd_threshold < 1.0)) {
    throw Error(ErrorKind::kUsage, "sift SD threshold must lie in (0, 1)");
  }
}

Extrema FindExtrema(std::span<const double> x) {
  Extrema e;
  for (std::size_t i = 1; i + 1 < x.size(); ++i) {
    if (x[i] > x[i - 1] && x[i] >= x[i + 1]) {
      // A plateau only counts if the signal falls after it.
      std::size_t j = i + 1;
      while (j < x.size() && x[j] == x[i]) ++j;
      if (j < x.size() && x[j] < x[i]) e.maxima.push_back(i);
    } else if (x[i] < x[i - 1] && x[i] <= x[i + 1]) {
      std::size_t j = i + 1;
      while (j < x.size() && x[j] == x[i]) ++j;
      if (j < x.size() && x[j] > x[i]) e.minima.push_back(i);
    }
  }
  return e;
}

std::size_t CountZeroCrossings(std::span<const double> x) {
  std::size_t count = 0;
  int prev = 0;
  for (double v : x) {
    int sign = (v > 0.0) - (v < 0.0);
    if (sign == 0) continue;
    if (prev != 0 && sign != prev) ++count;
    prev = sign;
  }
  return count;
}

bool HasImfShape(std::span<const double> x, std::size_t slack) {
  const std::size_t extrema = FindExtrema(x).count();
  const std::size_t zc = CountZeroCrossings(x);
  const std::size_t diff = extrema > zc ? extrema - zc : zc - extrema;
  return diff <= slack;
}

Series NaturalCubicSpline(std::span<const double> knots,
                          std::span<const double> values, std::size_t n) {
  const std::size_t k = knots.size();
  if (k < 2 || values.size() != k) {
    throw Error(ErrorKind::kInternal, "spline needs at least two knots");
  }
  // Second derivatives at the knots; natural ends have zero curvature.
  std::vector<double> m(k, 0.0);
  if (k > 2) {
    const std::size_t inner = k - 2;
    std::vector<double> diag(inner), upper(inner), rhs(inner);
    for (std::size_t i = 1; i + 1 < k; ++i) {
      const double h0 = knots[i] - knots[i - 1];
      const double h1 = knots[i + 1] - knots[i];
      diag[i - 1] = 2.0 * (h0 + h1);
      upper[i - 1] = h1;
      rhs[i - 1] = 6.0 * ((values[i + 1] - values[i]) / h1 -
                          (values[i] - values[i - 1]) / h0);
    }
    // Thomas algorithm; the sub-diagonal entry of row i equals upper[i - 1].
    for (std::size_t i = 1; i < inner; ++i) {
      const double w = upper[i - 1] / diag[i - 1];
      diag[i] -= w * upper[i - 1];
      rhs[i] -= w * rhs[i - 1];
    }
    m[inner] = rhs[inner - 1] / diag[inner - 1];
    for (std::size_t i = inner - 1; i-- > 0;) {
      m[i + 1] = (rhs[i] - upper[i] * m[i + 2]) / diag[i];
    }
  }

  Series out(n);
  std::size_t seg = 0;
  for (std::size_t s = 0; s < n; ++s) {
    const double t = static_cast<double>(s);
    while (seg + 2 < k && t > knots[seg + 1]) ++seg;
    const double h = knots[seg + 1] - knots[seg];
    const double a = (knots[seg + 1] - t) / h;
    const double b = (t - knots[seg]) / h;
    out[s] = a * values[seg] + b * values[seg + 1] +
             ((a * a * a - a) * m[seg] + (b * b * b - b) * m[seg + 1]) * h * h / 6.0;
  }
  return out;
}

ModeDecomposition Emd(std::span<const double> x, const SiftConfig& cfg) {
  cfg.Validate();
  if (x.size() < 8) {
    throw Error(ErrorKind::kInsufficientData, "EMD needs at least 8 samples");
  }
  RequireFinite(x, "EMD input");

  ModeDecomposition d;
  d.method = DecompositionMethod::kEmd;
  d.residual.assign(x.begin(), x.end());
  const std::size_t n = x.size();

  while (static_cast<int>(d.modes.size()) < cfg.max_modes) {
    if (FindExtrema(d.residual).count() < 3) break;

    Series h = d.residual;
    for (int iter = 0; iter < cfg.max_sift_iterations; ++iter) {
      const Extrema e = FindExtrema(h);
      if (e.count() < 3 || e.maxima.empty() || e.minima.empty()) break;
      Knots up, lo;
      BoundaryKnots(e, h, cfg.mirror_extrema, up, lo);
      if (up.t.size() < 2 || lo.t.size() < 2) break;
      const Series upper = NaturalCubicSpline(up.t, up.z, n);
      const Series lower = NaturalCubicSpline(lo.t, lo.z, n);

      const double energy = SumSquares(h);
      if (energy == 0.0) break;
      double change = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double mean = 0.5 * (upper[i] + lower[i]);
        h[i] -= mean;
        change += mean * mean;
      }
      if (change / energy < cfg.sd_threshold && HasImfShape(h)) break;
    }

    for (std::size_t i = 0; i < n; ++i) d.residual[i] -= h[i];
    d.modes.push_back(std::move(h));
  }
  return d;
}

ModeDecomposition Itd(std::span<const double> x, int max_levels) {
  if (x.size() < 5) {
    throw Error(ErrorKind::kInsufficientData, "ITD needs at least 5 samples");
  }
  if (max_levels < 1) throw Error(ErrorKind::kUsage, "ITD levels must be >= 1");
  RequireFinite(x, "ITD input");

  ModeDecomposition d;
  d.method = DecompositionMethod::kItd;
  Series signal(x.begin(), x.end());
  const std::size_t n = x.size();

  for (int level = 0; level < max_levels; ++level) {
    const Extrema e = FindExtrema(signal);
    if (e.count() == 0) break;

    std::vector<std::size_t> knots;
    knots.push_back(0);
    std::merge(e.maxima.begin(), e.maxima.end(), e.minima.begin(), e.minima.end(),
               std::back_inserter(knots));
    knots.push_back(n - 1);

    const std::size_t k = knots.size();
    std::vector<double> base(k);
    for (std::size_t j = 1; j + 1 < k; ++j) {
      const double t0 = static_cast<double>(knots[j - 1]);
      const double t1 = static_cast<double>(knots[j]);
      const double t2 = static_cast<double>(knots[j + 1]);
      const double x0 = signal[knots[j - 1]];
      const double x2 = signal[knots[j + 1]];
      base[j] = kItdMixing * (x0 + (t1 - t0) / (t2 - t0) * (x2 - x0)) +
                (1.0 - kItdMixing) * signal[knots[j]];
    }
    base[0] = base[1];
    base[k - 1] = base[k - 2];

    Series baseline(n);
    for (std::size_t j = 0; j + 1 < k; ++j) {
      const std::size_t a = knots[j];
      const std::size_t b = knots[j + 1];
      const double xa = signal[a];
      const double xb = signal[b];
      for (std::size_t t = a; t <= b; ++t) {
        double frac;
        if (xb != xa) {
          frac = (signal[t] - xa) / (xb - xa);
        } else {
          frac = static_cast<double>(t - a) / static_cast<double>(b - a);
        }
        baseline[t] = base[j] + frac * (base[j + 1] - base[j]);
      }
    }

    Series rotation(n);
    for (std::size_t t = 0; t < n; ++t) rotation[t] = signal[t] - baseline[t];
    d.modes.push_back(std::move(rotation));
    signal = std::move(baseline);
  }
  d.residual = std::move(signal);
  return d;
}

Series ItdImfChain(std::span<const double> x, int n, const SiftConfig& cfg) {
  if (n < 1) throw Error(ErrorKind::kUsage, "chain length must be >= 1");
  const ModeDecomposition itd = Itd(x, 1);
  Series out(x.size(), 0.0);
  if (itd.modes.empty()) return out;
  const ModeDecomposition emd = Emd(itd.modes.front(), cfg);
  const std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(n), emd.size());
  for (std::size_t m = 0; m < take; ++m) {
    for (std::size_t t = 0; t < out.size(); ++t) out[t] += emd.modes[m][t];
  }
  return out;
}

Series Reconstruct(const ModeDecomposition& d) {
  Series out = d.residual;
  for (const auto& mode : d.modes) {
    for (std::size_t t = 0; t < out.size(); ++t) out[t] += mode[t];
  }
  return out;
}

std::string DecompositionCsv(const ModeDecomposition& d) {
  std::string out;
  const char* prefix = d.method == DecompositionMethod::kEmd ? "imf" : "rotation";
  for (std::size_t m = 0; m < d.modes.size(); ++m) {
    out += prefix + std::to_string(m + 1) + ",";
  }
  out += "residual\n";
  char buf[32];
  for (std::size_t t = 0; t < d.residual.size(); ++t) {
    for (const auto& mode : d.modes) {
      std::snprintf(buf, sizeof(buf), "%.17g,", mode[t]);
      out += buf;
    }
    std::snprintf(buf, sizeof(buf), "%.17g\n", d.residual[t]);
    out += buf;
  }
  return out;
}

}  // namespace crashlens
