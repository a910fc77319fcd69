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

#ifndef CRASHLENS_DETECT_H_
#define CRASHLENS_DETECT_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace crashlens {

struct Reducer {
  enum class Kind { kMean, kMax, kVertex };
  Kind kind = Kind::kMean;
  std::size_t vertex = 0;  // kVertex only

  // "mean", "max" or "vertex:<k>".
  static Reducer Parse(std::string_view text);
  std::string Name() const;
};

struct CentralitySeries {
  std::vector<std::size_t> starts;  // window start indices, increasing
  std::vector<double> values;
  std::string source;

  std::size_t size() const { return values.size(); }
};

// One closeness vector per window, all over the same vertex set.
CentralitySeries SummarizeCentrality(
    const std::vector<std::size_t>& starts,
    const std::vector<std::vector<double>>& closeness, const Reducer& reducer,
    std::string source = {});

struct DetectorConfig {
  std::size_t baseline = 60;
  double z_threshold = 4.0;
  // Flagged positions separated by at most this many unflagged positions
  // belong to the same event.
  std::size_t merge_gap = 5;

  void Validate() const;
};

struct CrashEvent {
  std::size_t window_index = 0;  // series position of the peak
  std::size_t window_start = 0;
  std::string date;
  double peak = 0.0;
  double z = 0.0;
  std::size_t width = 1;  // flagged windows merged into the event
};

struct Detection {
  std::vector<CrashEvent> events;
  // Series positions skipped because the baseline MAD was zero.
  std::vector<std::size_t> degenerate_baselines;
};

// Robust z-score of s[t] against the previous `baseline` values:
// (s[t] - median) / (1.4826 * MAD). Flagged runs (gaps up to merge_gap)
// merge into one event at their argmax. `dates` (optional) labels positions.
Detection DetectCrashes(const CentralitySeries& s, const DetectorConfig& cfg,
                        const std::vector<std::string>& dates = {});

double Median(std::vector<double> values);
// Unscaled median absolute deviation about `center`.
double MedianAbsoluteDeviation(const std::vector<double>& values, double center);

std::string EventsJson(const std::vector<CrashEvent>& events);

}  // namespace crashlens

#endif  // CRASHLENS_DETECT_H_
