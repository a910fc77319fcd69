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

#include "crashlens/pipeline.h"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "crashlens/analytic.h"
#include "crashlens/behavior.h"
#include "crashlens/error.h"

namespace crashlens {
namespace {

using ojson = nlohmann::ordered_json;

constexpr std::size_t kSpotCheckEvery = 100;  // 1% of windows

int WorkerCount(const PipelineConfig& cfg, std::size_t jobs) {
  int n = cfg.threads > 0 ? cfg.threads
                          : static_cast<int>(std::thread::hardware_concurrency());
  if (const char* env = std::getenv("CRASHLENS_THREADS")) {
    int cap = 0;
    auto [ptr, ec] = std::from_chars(env, env + std::char_traits<char>::length(env), cap);
    if (ec == std::errc() && cap > 0) n = std::min(n, cap);
  }
  n = std::max(n, 1);
  return static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(n), jobs));
}

// Runs fn(0..count-1) on a small pool. Results are written by index, so the
// outcome does not depend on scheduling; the lowest failing index wins.
void ParallelFor(std::size_t count, int workers,
                 const std::function<void(std::size_t)>& fn) {
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto run = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    run();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(run);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

// Re-throws any error with its stage and location attached.
template <typename F>
auto Stage(const std::string& stage, const std::string& where, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    throw Error(e.kind(), "stage " + stage + (where.empty() ? "" : " (" + where + ")") +
                              ": " + e.what());
  } catch (const std::exception& e) {
    throw Error(ErrorKind::kInternal, "stage " + stage +
                                          (where.empty() ? "" : " (" + where + ")") +
                                          ": " + e.what());
  }
}

std::string WindowWhere(std::size_t index) { return "window " + std::to_string(index); }

Series PickMode(const ModeDecomposition& d, int k, const char* what,
                std::string& note) {
  if (d.modes.empty()) {
    note = std::string(what) + std::to_string(k) + " unavailable; no modes, using residual";
    return d.residual;
  }
  if (static_cast<std::size_t>(k) > d.modes.size()) {
    note = std::string(what) + std::to_string(k) + " unavailable; using " + what +
           std::to_string(d.modes.size());
    return d.modes.back();
  }
  return d.modes[static_cast<std::size_t>(k - 1)];
}

Series SelectComponent(const Series& x, const PipelineConfig& cfg, std::string& note) {
  const auto& sel = cfg.decomposition;
  switch (sel.kind) {
    case DecompositionSelector::Kind::kRaw:
      return x;
    case DecompositionSelector::Kind::kImf:
      return PickMode(Emd(x, cfg.sift), sel.k, "IMF", note);
    case DecompositionSelector::Kind::kItdRotation:
      return PickMode(Itd(x, cfg.itd_levels), sel.k, "rotation", note);
    case DecompositionSelector::Kind::kChain:
      return ItdImfChain(x, sel.k, cfg.sift);
  }
  return x;
}

double WrapAngle(double a) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  double r = std::fmod(a, kTwoPi);
  return r < 0.0 ? r + kTwoPi : r;
}

struct WindowResult {
  WindowRecord record;
  std::vector<double> closeness;
  std::optional<MarketGraph> graph;
};

ojson GraphToJson(std::size_t window, const MarketGraph& g) {
  ojson edges = ojson::array();
  for (const Edge& e : g.edges()) {
    edges.push_back({{"u", e.u}, {"v", e.v}, {"weight", e.weight}});
  }
  return ojson{{"window_index", window},
               {"kind", GraphKindName(g.kind())},
               {"vertices", g.labels()},
               {"edges", std::move(edges)}};
}

}  // namespace

DecompositionSelector DecompositionSelector::Parse(std::string_view text) {
  if (text == "raw") return {Kind::kRaw, 1};
  const auto colon = text.find(':');
  if (colon != std::string_view::npos) {
    const std::string_view head = text.substr(0, colon);
    const std::string_view tail = text.substr(colon + 1);
    int k = 0;
    auto [ptr, ec] = std::from_chars(tail.data(), tail.data() + tail.size(), k);
    if (ec == std::errc() && ptr == tail.data() + tail.size() && k >= 1) {
      if (head == "imf") return {Kind::kImf, k};
      if (head == "itd") return {Kind::kItdRotation, k};
      if (head == "chain") return {Kind::kChain, k};
    }
  }
  throw Error(ErrorKind::kUsage, "unknown decomposition '" + std::string(text) +
                                     "' (expected raw, imf:<k>, itd:<k> or chain:<n>)");
}

std::string DecompositionSelector::Name() const {
  switch (kind) {
    case Kind::kRaw: return "raw";
    case Kind::kImf: return "imf:" + std::to_string(k);
    case Kind::kItdRotation: return "itd:" + std::to_string(k);
    case Kind::kChain: return "chain:" + std::to_string(k);
  }
  return "raw";
}

std::string_view FlavorName(CorrelationFlavor flavor) {
  switch (flavor) {
    case CorrelationFlavor::kPlain: return "plain";
    case CorrelationFlavor::kPartial: return "partial";
    case CorrelationFlavor::kTensorSelf: return "tensor-self";
    case CorrelationFlavor::kHyperbolic: return "hyperbolic";
  }
  return "plain";
}

CorrelationFlavor ParseFlavor(std::string_view name) {
  if (name == "plain") return CorrelationFlavor::kPlain;
  if (name == "partial") return CorrelationFlavor::kPartial;
  if (name == "tensor-self") return CorrelationFlavor::kTensorSelf;
  if (name == "hyperbolic") return CorrelationFlavor::kHyperbolic;
  throw Error(ErrorKind::kUsage, "unknown correlation flavor '" + std::string(name) + "'");
}

AnalysisReport RunPipeline(const PipelineConfig& cfg) {
  cfg.Validate();
  if (cfg.input_path.empty()) throw Error(ErrorKind::kUsage, "config has no input path");
  LoadResult loaded = Stage("load", cfg.input_path,
                            [&] { return LoadPriceTableFile(cfg.input_path, cfg.schema); });
  AnalysisReport report = RunPipeline(cfg, loaded.table, loaded.excluded);
  if (!cfg.output_dir.empty()) WriteReport(report, cfg.output_dir);
  return report;
}

AnalysisReport RunPipeline(const PipelineConfig& cfg, const PriceTable& prices,
                           const std::vector<Exclusion>& excluded) {
  cfg.Validate();
  AnalysisReport report;
  report.config_json = PipelineConfigJson(cfg);
  report.symbols = prices.symbols();
  report.excluded = excluded;

  const ReturnTable returns = Stage("returns", "", [&] { return ComputeLogReturns(prices); });
  const std::size_t m = returns.num_assets();
  const std::size_t length = returns.length();
  if (cfg.window > length) {
    throw Error(ErrorKind::kInsufficientData,
                "stage windows: window " + std::to_string(cfg.window) + " exceeds " +
                    std::to_string(length) + " returns");
  }
  if (cfg.flavor == CorrelationFlavor::kPartial && cfg.partial_given >= m) {
    throw Error(ErrorKind::kUsage, "partial conditioning index " +
                                       std::to_string(cfg.partial_given) + " out of range");
  }
  const std::size_t graph_vertices =
      cfg.flavor == CorrelationFlavor::kPartial ? m - 1 : m;
  if (cfg.network == GraphKind::kPmfg && graph_vertices < 3) {
    throw Error(ErrorKind::kSize, "stage graph: PMFG needs at least 3 assets");
  }
  if (graph_vertices < 2) throw Error(ErrorKind::kSize, "stage graph: need at least 2 assets");

  // Decompose each full-length series once; windows slice the result.
  Eigen::MatrixXd selected(static_cast<Eigen::Index>(length), static_cast<Eigen::Index>(m));
  std::vector<std::string> symbol_notes(m);
  ParallelFor(m, WorkerCount(cfg, m), [&](std::size_t i) {
    const auto col = returns.returns().col(static_cast<Eigen::Index>(i));
    const Series x(col.data(), col.data() + col.size());
    const Series s = Stage("decompose", "symbol " + report.symbols[i],
                           [&] { return SelectComponent(x, cfg, symbol_notes[i]); });
    for (std::size_t t = 0; t < length; ++t) {
      selected(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(i)) = s[t];
    }
  });
  for (std::size_t i = 0; i < m; ++i) {
    if (!symbol_notes[i].empty()) {
      report.notes.push_back("symbol " + report.symbols[i] + ": " + symbol_notes[i]);
    }
  }

  // Instantaneous phases for the state classifier: the cross-sectional mean
  // series gives theta, the circular mean over assets gives gamma.
  std::vector<double> market_phase;
  bool market_degenerate = true;
  std::vector<std::vector<double>> asset_phase(m);
  if (length >= 8) {
    const Eigen::VectorXd mean = selected.rowwise().mean();
    const AnalyticSignal market = Stage("phase", "market", [&] {
      return AnalyticSignalOf(std::span<const double>(mean.data(), length));
    });
    market_phase = market.phase;
    market_degenerate = market.degenerate;
    ParallelFor(m, WorkerCount(cfg, m), [&](std::size_t i) {
      const auto col = selected.col(static_cast<Eigen::Index>(i));
      AnalyticSignal a = AnalyticSignalOf(std::span<const double>(col.data(), length));
      if (!a.degenerate) asset_phase[i] = std::move(a.phase);
    });
  } else {
    report.notes.push_back("series shorter than 8 samples; market states not classified");
  }

  const std::size_t count = WindowCount(length, cfg.window, cfg.stride);
  std::vector<WindowResult> results(count);
  ParallelFor(count, WorkerCount(cfg, count), [&](std::size_t w) {
    const std::string where = WindowWhere(w);
    WindowResult& res = results[w];
    WindowRecord& rec = res.record;
    rec.index = w;
    rec.start = w * cfg.stride;
    rec.date = returns.dates()[rec.start];

    const auto block = selected.middleRows(static_cast<Eigen::Index>(rec.start),
                                           static_cast<Eigen::Index>(cfg.window));
    const CorrelationMatrix c =
        Stage("correlation", where, [&] { return CorrelationMatrixOf(block, report.symbols); });
    const bool full = cfg.full_checks || w % kSpotCheckEvery == 0;
    Stage("validate", where, [&] {
      c.Validate(full ? CorrelationMatrix::Check::kFull
                      : CorrelationMatrix::Check::kStructural);
      return 0;
    });
    for (std::size_t i = 0; i < m; ++i) {
      if (c.degenerate()[i]) rec.notes.push_back("constant series " + report.symbols[i]);
    }
    rec.avg_corr = AverageCorrelation(c);
    rec.det = EquilibriumIndicator(c);

    std::optional<CorrelationMatrix> graph_corr;
    std::optional<DistanceMatrix> graph_dist;
    switch (cfg.flavor) {
      case CorrelationFlavor::kPlain:
        rec.avg_flavor = rec.avg_corr;
        graph_corr = c;
        break;
      case CorrelationFlavor::kPartial:
        try {
          graph_corr = PartialCorrelationMatrix(c, cfg.partial_given);
          if (full) graph_corr->Validate(CorrelationMatrix::Check::kFull);
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::kDegenerateConditioning) {
            throw Error(e.kind(), "stage partial (" + where + "): " + e.what());
          }
          // Keep the window: drop the conditioning asset from the plain matrix.
          rec.notes.push_back(std::string(e.what()) + "; using plain correlation");
          std::vector<std::size_t> keep;
          Labels labels;
          for (std::size_t i = 0; i < m; ++i) {
            if (i == cfg.partial_given) continue;
            keep.push_back(i);
            labels.push_back(report.symbols[i]);
          }
          Eigen::MatrixXd v(static_cast<Eigen::Index>(m - 1), static_cast<Eigen::Index>(m - 1));
          for (std::size_t a = 0; a < keep.size(); ++a) {
            for (std::size_t b = 0; b < keep.size(); ++b) {
              v(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = c(keep[a], keep[b]);
            }
          }
          graph_corr = CorrelationMatrix::Create(std::move(labels), std::move(v),
                                                 CorrelationMatrix::Check::kStructural);
        }
        rec.avg_flavor = AverageCorrelation(*graph_corr);
        break;
      case CorrelationFlavor::kTensorSelf:
        rec.avg_flavor = TensorAverageCorrelation(c, c);
        graph_corr = c;
        break;
      case CorrelationFlavor::kHyperbolic: {
        const HyperbolicMatrix h = HyperbolicMap(c);
        rec.avg_flavor = AverageUpperTriangle(h.values);
        graph_dist = Stage("distance", where, [&] { return HyperbolicDistance(h); });
        break;
      }
    }

    MarketGraph graph = Stage("graph", where, [&] {
      if (graph_dist) {
        return cfg.network == GraphKind::kMst ? Mst(*graph_dist) : Pmfg(*graph_dist);
      }
      return cfg.network == GraphKind::kMst ? Mst(CorrelationDistance(*graph_corr))
                                            : Pmfg(*graph_corr);
    });
    res.closeness = Stage("closeness", where, [&] { return ClosenessCentrality(graph); });
    double sum = 0.0;
    for (double v : res.closeness) sum += v;
    rec.closeness_mean = sum / static_cast<double>(res.closeness.size());
    rec.closeness_max = *std::max_element(res.closeness.begin(), res.closeness.end());

    const std::size_t last = rec.start + cfg.window - 1;
    if (!market_phase.empty() && !market_degenerate) {
      double sx = 0.0, sy = 0.0;
      for (const auto& ph : asset_phase) {
        if (ph.empty()) continue;
        sx += std::cos(ph[last]);
        sy += std::sin(ph[last]);
      }
      if (sx != 0.0 || sy != 0.0) {
        rec.state = static_cast<int>(
            ClassifyState(WrapAngle(market_phase[last]), WrapAngle(std::atan2(sy, sx))));
      }
    }
    res.graph = std::move(graph);
  });

  std::vector<std::size_t> starts;
  std::vector<std::vector<double>> closeness;
  std::vector<std::string> dates;
  for (const auto& r : results) {
    starts.push_back(r.record.start);
    closeness.push_back(r.closeness);
    dates.push_back(r.record.date);
  }
  const std::string source = cfg.decomposition.Name() + "/" +
                             std::string(FlavorName(cfg.flavor)) + "/" +
                             std::string(GraphKindName(cfg.network)) + "/closeness_" +
                             cfg.reducer.Name();
  const CentralitySeries series = Stage(
      "summarize", "", [&] { return SummarizeCentrality(starts, closeness, cfg.reducer, source); });
  for (std::size_t w = 0; w < count; ++w) results[w].record.closeness = series.values[w];

  if (count >= cfg.detector.baseline + 1) {
    Detection det = Stage("detect", "", [&] { return DetectCrashes(series, cfg.detector, dates); });
    report.events = std::move(det.events);
    report.degenerate_baselines = std::move(det.degenerate_baselines);
  } else {
    report.notes.push_back("only " + std::to_string(count) +
                           " windows; crash detection needs baseline + 1");
  }

  std::set<std::size_t> keep{0, count - 1};
  for (const auto& e : report.events) keep.insert(e.window_index);
  for (std::size_t w : cfg.snapshot_windows) {
    if (w < count) {
      keep.insert(w);
    } else {
      report.notes.push_back("snapshot window " + std::to_string(w) + " out of range");
    }
  }
  for (std::size_t w : keep) report.snapshots.emplace(w, std::move(*results[w].graph));

  report.windows.reserve(count);
  for (auto& r : results) report.windows.push_back(std::move(r.record));
  return report;
}

std::string ReportJson(const AnalysisReport& report) {
  ojson j;
  j["config"] = ojson::parse(report.config_json.empty() ? "{}" : report.config_json);
  j["symbols"] = report.symbols;
  j["excluded"] = ojson::array();
  for (const auto& e : report.excluded) {
    j["excluded"].push_back({{"symbol", e.symbol}, {"coverage", e.coverage}});
  }
  j["windows"] = ojson::array();
  for (const auto& w : report.windows) {
    j["windows"].push_back({{"index", w.index},
                            {"start", w.start},
                            {"date", w.date},
                            {"avg_corr", w.avg_corr},
                            {"avg_flavor", w.avg_flavor},
                            {"det", w.det},
                            {"closeness", w.closeness},
                            {"closeness_mean", w.closeness_mean},
                            {"closeness_max", w.closeness_max},
                            {"state", w.state},
                            {"notes", w.notes}});
  }
  j["events"] = ojson::parse(EventsJson(report.events));
  j["degenerate_baselines"] = report.degenerate_baselines;
  j["notes"] = report.notes;
  j["snapshots"] = ojson::array();
  for (const auto& [w, g] : report.snapshots) j["snapshots"].push_back(GraphToJson(w, g));
  return j.dump(1) + "\n";
}

AnalysisReport ParseReportJson(std::string_view text) {
  ojson j;
  try {
    j = ojson::parse(text);
  } catch (const ojson::parse_error& e) {
    throw Error(ErrorKind::kParse, std::string("report is not valid JSON: ") + e.what());
  }
  AnalysisReport r;
  try {
    r.config_json = j.at("config").dump();
    r.symbols = j.at("symbols").get<Labels>();
    for (const auto& e : j.at("excluded")) {
      r.excluded.push_back({e.at("symbol").get<std::string>(), e.at("coverage").get<double>()});
    }
    for (const auto& w : j.at("windows")) {
      WindowRecord rec;
      rec.index = w.at("index").get<std::size_t>();
      rec.start = w.at("start").get<std::size_t>();
      rec.date = w.at("date").get<std::string>();
      rec.avg_corr = w.at("avg_corr").get<double>();
      rec.avg_flavor = w.at("avg_flavor").get<double>();
      rec.det = w.at("det").get<double>();
      rec.closeness = w.at("closeness").get<double>();
      rec.closeness_mean = w.at("closeness_mean").get<double>();
      rec.closeness_max = w.at("closeness_max").get<double>();
      rec.state = w.at("state").get<int>();
      rec.notes = w.at("notes").get<std::vector<std::string>>();
      r.windows.push_back(std::move(rec));
    }
    for (const auto& e : j.at("events")) {
      CrashEvent ev;
      ev.window_index = e.at("window_index").get<std::size_t>();
      ev.window_start =
          ev.window_index < r.windows.size() ? r.windows[ev.window_index].start : 0;
      ev.date = e.at("date").get<std::string>();
      ev.peak = e.at("peak").get<double>();
      ev.z = e.at("z").get<double>();
      ev.width = e.at("width").get<std::size_t>();
      r.events.push_back(std::move(ev));
    }
    r.degenerate_baselines = j.at("degenerate_baselines").get<std::vector<std::size_t>>();
    r.notes = j.at("notes").get<std::vector<std::string>>();
    for (const auto& s : j.at("snapshots")) {
      std::vector<Edge> edges;
      for (const auto& e : s.at("edges")) {
        edges.push_back({e.at("u").get<std::size_t>(), e.at("v").get<std::size_t>(),
                         e.at("weight").get<double>()});
      }
      r.snapshots.emplace(s.at("window_index").get<std::size_t>(),
                          MarketGraph::Create(s.at("vertices").get<Labels>(), std::move(edges),
                                              ParseGraphKind(s.at("kind").get<std::string>())));
    }
  } catch (const ojson::exception& e) {
    throw Error(ErrorKind::kParse, std::string("malformed report: ") + e.what());
  }
  return r;
}

AnalysisReport LoadReportFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kUsage, "cannot open report '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ParseReportJson(ss.str());
}

void WriteReport(const AnalysisReport& report, const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::kUsage, "cannot create output directory '" + dir + "'");
  const auto path = std::filesystem::path(dir) / "report.json";
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kUsage, "cannot write '" + path.string() + "'");
  out << ReportJson(report);
}

std::vector<std::string> PlotSeriesNames() {
  return {"avg_corr", "avg_flavor", "det", "closeness", "closeness_mean",
          "closeness_max", "state"};
}

std::string EmitPlotData(const AnalysisReport& report, std::string_view series) {
  std::function<double(const WindowRecord&)> get;
  if (series == "avg_corr") get = [](const WindowRecord& w) { return w.avg_corr; };
  else if (series == "avg_flavor") get = [](const WindowRecord& w) { return w.avg_flavor; };
  else if (series == "det") get = [](const WindowRecord& w) { return w.det; };
  else if (series == "closeness") get = [](const WindowRecord& w) { return w.closeness; };
  else if (series == "closeness_mean") get = [](const WindowRecord& w) { return w.closeness_mean; };
  else if (series == "closeness_max") get = [](const WindowRecord& w) { return w.closeness_max; };
  else if (series == "state") get = [](const WindowRecord& w) { return double(w.state); };
  if (!get) {
    std::string names;
    for (const auto& n : PlotSeriesNames()) names += (names.empty() ? "" : ", ") + n;
    throw Error(ErrorKind::kUsage,
                "unknown series '" + std::string(series) + "' (expected one of " + names + ")");
  }
  std::string out = "date," + std::string(series) + "\n";
  char buf[40];
  for (const auto& w : report.windows) {
    std::snprintf(buf, sizeof(buf), ",%.17g\n", get(w));
    out += w.date;
    out += buf;
  }
  return out;
}

std::string SnapshotGraph(const AnalysisReport& report, std::size_t window,
                          GraphFormat format) {
  auto it = report.snapshots.find(window);
  if (it == report.snapshots.end()) {
    std::string kept;
    for (const auto& [w, g] : report.snapshots) kept += (kept.empty() ? "" : ", ") + std::to_string(w);
    throw Error(ErrorKind::kUsage, "window " + std::to_string(window) +
                                       " was not retained; retained windows: " + kept);
  }
  return ExportGraph(it->second, format);
}

}  // namespace crashlens
