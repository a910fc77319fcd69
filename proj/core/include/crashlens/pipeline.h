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

#ifndef CRASHLENS_PIPELINE_H_
#define CRASHLENS_PIPELINE_H_

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "crashlens/corrnet.h"
#include "crashlens/decompose.h"
#include "crashlens/detect.h"
#include "crashlens/marketdata.h"
#include "crashlens/netgraph.h"

namespace crashlens {

// Which component of each return series feeds the correlation windows.
struct DecompositionSelector {
  enum class Kind { kRaw, kImf, kItdRotation, kChain };
  Kind kind = Kind::kChain;
  int k = 3;  // IMF index, rotation index (1-based) or chain length n

  // "raw", "imf:<k>", "itd:<k>", "chain:<n>".
  static DecompositionSelector Parse(std::string_view text);
  std::string Name() const;
};

enum class CorrelationFlavor { kPlain, kPartial, kTensorSelf, kHyperbolic };

std::string_view FlavorName(CorrelationFlavor flavor);
CorrelationFlavor ParseFlavor(std::string_view name);

struct PipelineConfig {
  std::string input_path;
  PriceSchema schema;
  std::size_t window = 20;
  std::size_t stride = 1;
  DecompositionSelector decomposition;
  SiftConfig sift;
  int itd_levels = 10;
  GraphKind network = GraphKind::kPmfg;
  CorrelationFlavor flavor = CorrelationFlavor::kPlain;
  std::size_t partial_given = 0;  // conditioning asset for kPartial
  Reducer reducer;
  DetectorConfig detector;
  std::string output_dir;
  // Retained in addition to the first, crash-flagged and last windows.
  std::vector<std::size_t> snapshot_windows;
  // Check every window's correlation matrix in full instead of a 1% sample.
  bool full_checks = false;
  // Worker count; 0 means CRASHLENS_THREADS or the hardware concurrency.
  int threads = 0;

  void Validate() const;
};

// Format picked by extension: .toml, otherwise JSON.
PipelineConfig LoadPipelineConfig(const std::string& path);
PipelineConfig ParsePipelineConfigJson(std::string_view text);
PipelineConfig ParsePipelineConfigToml(std::string_view text);
// Echo of the result-affecting fields (threads are omitted).
std::string PipelineConfigJson(const PipelineConfig& cfg);

struct WindowRecord {
  std::size_t index = 0;
  std::size_t start = 0;
  std::string date;
  double avg_corr = 0.0;    // mean upper-triangle correlation
  double avg_flavor = 0.0;  // same statistic on the flavored matrix
  double det = 0.0;         // equilibrium indicator
  double closeness = 0.0;   // configured reducer
  double closeness_mean = 0.0;
  double closeness_max = 0.0;
  int state = 0;  // market state 1..8, 0 unclassified
  std::vector<std::string> notes;
};

struct AnalysisReport {
  std::string config_json;
  Labels symbols;
  std::vector<Exclusion> excluded;
  std::vector<WindowRecord> windows;
  std::vector<CrashEvent> events;
  std::vector<std::size_t> degenerate_baselines;
  std::vector<std::string> notes;
  std::map<std::size_t, MarketGraph> snapshots;
};

// Loads cfg.input_path and runs every stage; writes report.json into
// cfg.output_dir when it is non-empty.
AnalysisReport RunPipeline(const PipelineConfig& cfg);

// Same over an already loaded table.
AnalysisReport RunPipeline(const PipelineConfig& cfg, const PriceTable& prices,
                           const std::vector<Exclusion>& excluded = {});

std::string ReportJson(const AnalysisReport& report);
AnalysisReport ParseReportJson(std::string_view text);
AnalysisReport LoadReportFile(const std::string& path);
void WriteReport(const AnalysisReport& report, const std::string& dir);

// Series names accepted by EmitPlotData.
std::vector<std::string> PlotSeriesNames();

// Two-column CSV `date,<series>`, one row per window.
std::string EmitPlotData(const AnalysisReport& report, std::string_view series);

// Throws kUsage listing the retained windows when `window` was not kept.
std::string SnapshotGraph(const AnalysisReport& report, std::size_t window,
                          GraphFormat format);

}  // namespace crashlens

#endif  // CRASHLENS_PIPELINE_H_
