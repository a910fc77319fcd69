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

// crashlens command line: run the pipeline, extract plot series and graph
// snapshots from a saved report, or write a synthetic price panel.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "crashlens/error.h"
#include "crashlens/netgraph.h"
#include "crashlens/pipeline.h"
#include "crashlens/synthetic.h"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitInternal = 4;

int Run(const std::string& config_path, const std::string& output_override) {
  crashlens::PipelineConfig cfg = crashlens::LoadPipelineConfig(config_path);
  if (!output_override.empty()) cfg.output_dir = output_override;
  if (cfg.output_dir.empty()) cfg.output_dir = ".";
  const crashlens::AnalysisReport report = crashlens::RunPipeline(cfg);
  std::fprintf(stderr, "%zu windows, %zu events; report written to %s/report.json\n",
               report.windows.size(), report.events.size(), cfg.output_dir.c_str());
  for (const auto& e : report.events) {
    std::printf("event window=%zu date=%s peak=%.6f z=%.3f width=%zu\n", e.window_index,
                e.date.c_str(), e.peak, e.z, e.width);
  }
  return 0;
}

int Synth(const crashlens::SyntheticMarket& market, const std::string& out) {
  const std::string csv = crashlens::PriceTableCsv(crashlens::GenerateSyntheticMarket(market));
  if (out.empty() || out == "-") {
    std::cout << csv;
    return 0;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) throw crashlens::Error(crashlens::ErrorKind::kUsage, "cannot write '" + out + "'");
  f << csv;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Crash detection from correlation networks of decomposed returns"};
  app.require_subcommand(1);

  std::string config_path, output_dir;
  auto* run = app.add_subcommand("run", "Run the full pipeline from a TOML or JSON config");
  run->add_option("--config", config_path, "Config file (.toml or .json)")
      ->required()
      ->check(CLI::ExistingFile);
  run->add_option("--output", output_dir, "Override the config's output directory");

  std::string report_path, series;
  auto* plot = app.add_subcommand("plot-data", "Print one report series as date,value CSV");
  plot->add_option("--report", report_path, "report.json from a previous run")->required();
  plot->add_option("--series", series, "Series name")->required();

  std::size_t window = 0;
  std::string format = "dot";
  auto* snap = app.add_subcommand("snapshot", "Print a retained window's graph");
  snap->add_option("--report", report_path, "report.json from a previous run")->required();
  snap->add_option("--window", window, "Window index")->required();
  snap->add_option("--format", format, "dot, graphml or json")
      ->check(CLI::IsMember({"dot", "graphml", "json"}));

  crashlens::SyntheticMarket market;
  std::string synth_out;
  auto* synth = app.add_subcommand("synth", "Write a synthetic price panel with a crash");
  synth->add_option("--assets", market.assets);
  synth->add_option("--days", market.days);
  synth->add_option("--crash-start", market.crash_start);
  synth->add_option("--crash-length", market.crash_length);
  synth->add_option("--seed", market.seed);
  synth->add_option("--out", synth_out, "Output CSV (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*run) return Run(config_path, output_dir);
    if (*plot) {
      std::cout << crashlens::EmitPlotData(crashlens::LoadReportFile(report_path), series);
      return 0;
    }
    if (*snap) {
      std::cout << crashlens::SnapshotGraph(crashlens::LoadReportFile(report_path), window,
                                            crashlens::ParseGraphFormat(format));
      return 0;
    }
    if (*synth) return Synth(market, synth_out);
  } catch (const crashlens::Error& e) {
    std::fprintf(stderr, "crashlens: %s error: %s\n",
                 std::string(crashlens::ErrorKindName(e.kind())).c_str(), e.what());
    return crashlens::ExitCodeFor(e.kind());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "crashlens: internal error: %s\n", e.what());
    return kExitInternal;
  }
  return kExitUsage;
}
