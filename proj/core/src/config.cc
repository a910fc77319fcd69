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

// Pipeline configuration: JSON and TOML front ends over one schema.

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>
#include <toml.hpp>

#include "crashlens/error.h"
#include "crashlens/pipeline.h"

namespace crashlens {
namespace {

using nlohmann::json;

[[noreturn]] void ConfigFail(const std::string& what) {
  throw Error(ErrorKind::kUsage, "config: " + what);
}

void RejectUnknown(const json& obj, const std::set<std::string>& known,
                   const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!known.count(it.key())) ConfigFail("unknown key '" + where + it.key() + "'");
  }
}

template <typename T>
void Read(const json& obj, const char* key, T& out, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) return;
  try {
    out = it->get<T>();
  } catch (const json::exception&) {
    ConfigFail("bad value for '" + where + key + "'");
  }
}

void ReadSize(const json& obj, const char* key, std::size_t& out,
              const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) return;
  if (!it->is_number_integer() || it->get<long long>() < 0) {
    ConfigFail("'" + where + key + "' must be a non-negative integer");
  }
  out = it->get<std::size_t>();
}

CsvLayout ParseLayout(const std::string& s) {
  if (s == "wide") return CsvLayout::kWide;
  if (s == "long") return CsvLayout::kLong;
  ConfigFail("layout must be 'wide' or 'long', got '" + s + "'");
}

PipelineConfig FromJson(const json& root) {
  if (!root.is_object()) ConfigFail("top level must be a table/object");
  RejectUnknown(root,
                {"input", "window", "stride", "decomposition", "sift", "itd_levels",
                 "network", "correlation", "reducer", "detector", "output_dir",
                 "snapshot_windows", "full_checks", "threads"},
                "");
  PipelineConfig cfg;
  if (auto it = root.find("input"); it != root.end()) {
    if (!it->is_object()) ConfigFail("'input' must be a table");
    RejectUnknown(*it,
                  {"path", "layout", "date_column", "symbol_column", "close_column",
                   "min_coverage"},
                  "input.");
    Read(*it, "path", cfg.input_path, "input.");
    std::string layout = "wide";
    Read(*it, "layout", layout, "input.");
    cfg.schema.layout = ParseLayout(layout);
    Read(*it, "date_column", cfg.schema.date_column, "input.");
    Read(*it, "symbol_column", cfg.schema.symbol_column, "input.");
    Read(*it, "close_column", cfg.schema.close_column, "input.");
    Read(*it, "min_coverage", cfg.schema.min_coverage, "input.");
  }
  ReadSize(root, "window", cfg.window, "");
  ReadSize(root, "stride", cfg.stride, "");
  std::string text;
  if (root.contains("decomposition")) {
    Read(root, "decomposition", text, "");
    cfg.decomposition = DecompositionSelector::Parse(text);
  }
  if (auto it = root.find("sift"); it != root.end()) {
    RejectUnknown(*it, {"max_modes", "max_iterations", "sd_threshold", "mirror_extrema"},
                  "sift.");
    Read(*it, "max_modes", cfg.sift.max_modes, "sift.");
    Read(*it, "max_iterations", cfg.sift.max_sift_iterations, "sift.");
    Read(*it, "sd_threshold", cfg.sift.sd_threshold, "sift.");
    Read(*it, "mirror_extrema", cfg.sift.mirror_extrema, "sift.");
  }
  Read(root, "itd_levels", cfg.itd_levels, "");
  if (root.contains("network")) {
    Read(root, "network", text, "");
    cfg.network = ParseGraphKind(text);
    if (cfg.network == GraphKind::kCustom) ConfigFail("network must be 'mst' or 'pmfg'");
  }
  if (root.contains("correlation")) {
    Read(root, "correlation", text, "");
    const auto colon = text.find(':');
    cfg.flavor = ParseFlavor(text.substr(0, colon));
    if (colon != std::string::npos) {
      if (cfg.flavor != CorrelationFlavor::kPartial) {
        ConfigFail("only 'partial' takes a conditioning index");
      }
      try {
        std::size_t used = 0;
        const std::string idx = text.substr(colon + 1);
        cfg.partial_given = std::stoul(idx, &used);
        if (used != idx.size()) throw std::invalid_argument(idx);
      } catch (const std::exception&) {
        ConfigFail("bad conditioning index in '" + text + "'");
      }
    }
  }
  if (root.contains("reducer")) {
    Read(root, "reducer", text, "");
    cfg.reducer = Reducer::Parse(text);
  }
  if (auto it = root.find("detector"); it != root.end()) {
    RejectUnknown(*it, {"baseline", "z_threshold", "merge_gap"}, "detector.");
    ReadSize(*it, "baseline", cfg.detector.baseline, "detector.");
    Read(*it, "z_threshold", cfg.detector.z_threshold, "detector.");
    ReadSize(*it, "merge_gap", cfg.detector.merge_gap, "detector.");
  }
  Read(root, "output_dir", cfg.output_dir, "");
  if (auto it = root.find("snapshot_windows"); it != root.end()) {
    if (!it->is_array()) ConfigFail("'snapshot_windows' must be an array");
    for (const auto& v : *it) {
      if (!v.is_number_integer() || v.get<long long>() < 0) {
        ConfigFail("'snapshot_windows' entries must be non-negative integers");
      }
      cfg.snapshot_windows.push_back(v.get<std::size_t>());
    }
  }
  Read(root, "full_checks", cfg.full_checks, "");
  Read(root, "threads", cfg.threads, "");
  cfg.Validate();
  return cfg;
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kUsage, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

void PipelineConfig::Validate() const {
  if (window < 2) ConfigFail("window must be >= 2");
  if (stride < 1) ConfigFail("stride must be >= 1");
  if (decomposition.kind != DecompositionSelector::Kind::kRaw && decomposition.k < 1) {
    ConfigFail("decomposition index must be >= 1");
  }
  if (itd_levels < 1) ConfigFail("itd_levels must be >= 1");
  if (threads < 0) ConfigFail("threads must be >= 0");
  sift.Validate();
  detector.Validate();
}

PipelineConfig ParsePipelineConfigJson(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    ConfigFail(std::string("invalid JSON: ") + e.what());
  }
  return FromJson(root);
}

PipelineConfig ParsePipelineConfigToml(std::string_view text) {
  toml::table table;
  try {
    table = toml::parse(text);
  } catch (const toml::parse_error& e) {
    ConfigFail(std::string("invalid TOML: ") + std::string(e.description()));
  }
  std::ostringstream ss;
  ss << toml::json_formatter{table};
  return FromJson(json::parse(ss.str()));
}

PipelineConfig LoadPipelineConfig(const std::string& path) {
  const std::string text = ReadFile(path);
  const std::filesystem::path p(path);
  PipelineConfig cfg = p.extension() == ".toml" ? ParsePipelineConfigToml(text)
                                                : ParsePipelineConfigJson(text);
  // Relative paths in a config file are relative to that file.
  const auto base = p.parent_path();
  if (!cfg.input_path.empty() && std::filesystem::path(cfg.input_path).is_relative()) {
    cfg.input_path = (base / cfg.input_path).lexically_normal().string();
  }
  if (!cfg.output_dir.empty() && std::filesystem::path(cfg.output_dir).is_relative()) {
    cfg.output_dir = (base / cfg.output_dir).lexically_normal().string();
  }
  return cfg;
}

std::string PipelineConfigJson(const PipelineConfig& cfg) {
  nlohmann::ordered_json j;
  j["input"] = {
      {"path", cfg.input_path},
      {"layout", cfg.schema.layout == CsvLayout::kWide ? "wide" : "long"},
      {"date_column", cfg.schema.date_column},
      {"symbol_column", cfg.schema.symbol_column},
      {"close_column", cfg.schema.close_column},
      {"min_coverage", cfg.schema.min_coverage},
  };
  j["window"] = cfg.window;
  j["stride"] = cfg.stride;
  j["decomposition"] = cfg.decomposition.Name();
  j["sift"] = {{"max_modes", cfg.sift.max_modes},
               {"max_iterations", cfg.sift.max_sift_iterations},
               {"sd_threshold", cfg.sift.sd_threshold},
               {"mirror_extrema", cfg.sift.mirror_extrema}};
  j["itd_levels"] = cfg.itd_levels;
  j["network"] = GraphKindName(cfg.network);
  std::string flavor(FlavorName(cfg.flavor));
  if (cfg.flavor == CorrelationFlavor::kPartial) {
    flavor += ":" + std::to_string(cfg.partial_given);
  }
  j["correlation"] = flavor;
  j["reducer"] = cfg.reducer.Name();
  j["detector"] = {{"baseline", cfg.detector.baseline},
                   {"z_threshold", cfg.detector.z_threshold},
                   {"merge_gap", cfg.detector.merge_gap}};
  j["snapshot_windows"] = cfg.snapshot_windows;
  j["full_checks"] = cfg.full_checks;
  return j.dump();
}

}  // namespace crashlens
