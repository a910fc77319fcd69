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

#include "crashlens/detect.h"

#include <algorithm>
#include <charconv>
#include <cmath>

#include <nlohmann/json.hpp>

#include "crashlens/error.h"

namespace crashlens {
namespace {

constexpr double kMadToSigma = 1.4826;

}  // namespace

Reducer Reducer::Parse(std::string_view text) {
  if (text == "mean") return {Kind::kMean, 0};
  if (text == "max") return {Kind::kMax, 0};
  constexpr std::string_view kVertex = "vertex:";
  if (text.substr(0, kVertex.size()) == kVertex) {
    std::string_view rest = text.substr(kVertex.size());
    std::size_t k = 0;
    auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), k);
    if (ec == std::errc() && ptr == rest.data() + rest.size() && !rest.empty()) {
      return {Kind::kVertex, k};
    }
  }
  throw Error(ErrorKind::kUsage, "unknown reducer '" + std::string(text) +
                                     "' (expected mean, max or vertex:<k>)");
}

std::string Reducer::Name() const {
  switch (kind) {
    case Kind::kMean: return "mean";
    case Kind::kMax: return "max";
    case Kind::kVertex: return "vertex:" + std::to_string(vertex);
  }
  return "mean";
}

CentralitySeries SummarizeCentrality(const std::vector<std::size_t>& starts,
                                     const std::vector<std::vector<double>>& closeness,
                                     const Reducer& reducer, std::string source) {
  if (closeness.empty()) throw Error(ErrorKind::kUsage, "no closeness windows to summarize");
  if (starts.size() != closeness.size()) {
    throw Error(ErrorKind::kShape, "window starts do not match closeness windows");
  }
  const std::size_t vertices = closeness.front().size();
  CentralitySeries out;
  out.source = std::move(source);
  out.starts = starts;
  out.values.reserve(closeness.size());
  for (std::size_t w = 0; w < closeness.size(); ++w) {
    const auto& c = closeness[w];
    if (c.size() != vertices || c.empty()) {
      throw Error(ErrorKind::kShape, "window " + std::to_string(w) +
                                         " has a different vertex set");
    }
    if (w > 0 && starts[w] <= starts[w - 1]) {
      throw Error(ErrorKind::kUsage, "window starts must be strictly increasing");
    }
    double v = 0.0;
    switch (reducer.kind) {
      case Reducer::Kind::kMean:
        for (double x : c) v += x;
        v /= static_cast<double>(c.size());
        break;
      case Reducer::Kind::kMax:
        v = *std::max_element(c.begin(), c.end());
        break;
      case Reducer::Kind::kVertex:
        if (reducer.vertex >= c.size()) {
          throw Error(ErrorKind::kUsage, "reducer vertex " + std::to_string(reducer.vertex) +
                                             " out of range");
        }
        v = c[reducer.vertex];
        break;
    }
    out.values.push_back(v);
  }
  return out;
}

void DetectorConfig::Validate() const {
  if (baseline < 5) throw Error(ErrorKind::kUsage, "detector baseline must be >= 5");
  if (!(z_threshold > 0.0)) throw Error(ErrorKind::kUsage, "z threshold must be > 0");
}

double Median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid),
                   values.end());
  double med = values[mid];
  if (values.size() % 2 == 0) {
    med = 0.5 * (med + *std::max_element(values.begin(),
                                         values.begin() + static_cast<std::ptrdiff_t>(mid)));
  }
  return med;
}

double MedianAbsoluteDeviation(const std::vector<double>& values, double center) {
  std::vector<double> dev;
  dev.reserve(values.size());
  for (double v : values) dev.push_back(std::abs(v - center));
  return Median(std::move(dev));
}

Detection DetectCrashes(const CentralitySeries& s, const DetectorConfig& cfg,
                        const std::vector<std::string>& dates) {
  cfg.Validate();
  const std::size_t n = s.size();
  if (n < cfg.baseline + 1) {
    throw Error(ErrorKind::kInsufficientData,
                "series of " + std::to_string(n) + " values is shorter than baseline + 1");
  }
  if (!dates.empty() && dates.size() != n) {
    throw Error(ErrorKind::kShape, "date labels do not match the series");
  }
  for (double v : s.values) {
    if (!std::isfinite(v)) throw Error(ErrorKind::kData, "non-finite centrality value");
  }

  Detection out;
  std::vector<double> z(n, 0.0);
  std::vector<bool> flagged(n, false);
  for (std::size_t t = cfg.baseline; t < n; ++t) {
    std::vector<double> window(s.values.begin() + static_cast<std::ptrdiff_t>(t - cfg.baseline),
                               s.values.begin() + static_cast<std::ptrdiff_t>(t));
    const double med = Median(window);
    const double mad = MedianAbsoluteDeviation(window, med);
    if (mad == 0.0) {
      out.degenerate_baselines.push_back(t);
      continue;
    }
    z[t] = (s.values[t] - med) / (kMadToSigma * mad);
    flagged[t] = z[t] >= cfg.z_threshold;
  }

  for (std::size_t t = 0; t < n;) {
    if (!flagged[t]) {
      ++t;
      continue;
    }
    std::size_t last = t;
    std::size_t peak = t;
    std::size_t count = 0;
    for (std::size_t u = t; u < n && u <= last + cfg.merge_gap + 1; ++u) {
      if (!flagged[u]) continue;
      ++count;
      last = u;
      if (s.values[u] > s.values[peak]) peak = u;
    }
    CrashEvent e;
    e.window_index = peak;
    e.window_start = s.starts.empty() ? peak : s.starts[peak];
    e.date = dates.empty() ? std::string() : dates[peak];
    e.peak = s.values[peak];
    e.z = z[peak];
    e.width = count;
    out.events.push_back(std::move(e));
    t = last + 1;
  }
  return out;
}

std::string EventsJson(const std::vector<CrashEvent>& events) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const auto& e : events) {
    out.push_back({{"window_index", e.window_index},
                   {"date", e.date},
                   {"peak", e.peak},
                   {"z", e.z},
                   {"width", e.width}});
  }
  return out.dump();
}

}  // namespace crashlens
