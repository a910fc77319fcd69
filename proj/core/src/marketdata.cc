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

#include "crashlens/marketdata.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "crashlens/error.h"

namespace crashlens {
namespace {

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

// RFC 4180 style split of one line; doubled quotes inside quoted fields.
std::optional<std::vector<std::string>> SplitCsvLine(std::string_view line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(ch);
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      fields.emplace_back(Trim(cur));
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  if (quoted) return std::nullopt;
  fields.emplace_back(Trim(cur));
  return fields;
}

bool IsMissing(std::string_view cell) {
  return cell.empty() || cell == "NA" || cell == "N/A" || cell == "NaN" ||
         cell == "nan" || cell == "null";
}

std::optional<double> ParseNumber(std::string_view cell) {
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc() || ptr != cell.data() + cell.size()) return std::nullopt;
  return value;
}

bool IsInteger(std::string_view s) {
  if (s.empty()) return false;
  long long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  return ec == std::errc() && ptr == s.data() + s.size();
}

// Dates are opaque labels: numeric order when every label is an integer,
// lexicographic otherwise.
bool AllIntegerLabels(const std::vector<std::string>& dates) {
  return std::all_of(dates.begin(), dates.end(),
                     [](const std::string& d) { return IsInteger(d); });
}

bool DateLess(const std::string& a, const std::string& b, bool numeric) {
  if (numeric) return std::stoll(a) < std::stoll(b);
  return a < b;
}

[[noreturn]] void ParseFail(std::size_t line, const std::string& what) {
  throw Error(ErrorKind::kParse, "line " + std::to_string(line) + ": " + what);
}

std::size_t ColumnIndex(const std::vector<std::string>& header,
                        const std::string& name) {
  auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) ParseFail(1, "missing column '" + name + "'");
  return static_cast<std::size_t>(it - header.begin());
}

// Sparse observations before alignment: cells[symbol][date] = price.
struct Observations {
  std::vector<std::string> symbols;  // first-appearance order
  std::vector<std::string> dates;    // first-appearance order, unique
  std::vector<std::unordered_map<std::string, double>> cells;
};

double CheckedPrice(std::string_view cell, std::size_t line,
                    const std::string& symbol, const std::string& date) {
  auto value = ParseNumber(cell);
  if (!value) ParseFail(line, "cannot parse price '" + std::string(cell) + "'");
  if (!std::isfinite(*value)) {
    ParseFail(line, "non-finite price for " + symbol);
  }
  if (*value <= 0.0) {
    throw Error(ErrorKind::kData, "non-positive price " + std::string(cell) +
                                      " for symbol " + symbol + " on " + date);
  }
  return *value;
}

Observations ReadWide(std::istream& in, const PriceSchema& schema) {
  Observations obs;
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  std::size_t date_col = 0;
  std::vector<std::size_t> symbol_cols;
  std::set<std::string> seen_dates;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    auto fields = SplitCsvLine(line);
    if (!fields) ParseFail(line_no, "unterminated quote");
    if (header.empty()) {
      header = *fields;
      date_col = ColumnIndex(header, schema.date_column);
      for (std::size_t c = 0; c < header.size(); ++c) {
        if (c == date_col) continue;
        if (header[c].empty()) ParseFail(line_no, "empty symbol name in header");
        if (std::find(obs.symbols.begin(), obs.symbols.end(), header[c]) !=
            obs.symbols.end()) {
          ParseFail(line_no, "duplicate symbol '" + header[c] + "'");
        }
        obs.symbols.push_back(header[c]);
        symbol_cols.push_back(c);
      }
      obs.cells.resize(obs.symbols.size());
      continue;
    }
    if (fields->size() != header.size()) {
      ParseFail(line_no, "expected " + std::to_string(header.size()) +
                             " fields, got " + std::to_string(fields->size()));
    }
    const std::string& date = (*fields)[date_col];
    if (date.empty()) ParseFail(line_no, "empty date");
    if (!seen_dates.insert(date).second) {
      throw Error(ErrorKind::kData, "duplicate date " + date + " at line " +
                                        std::to_string(line_no));
    }
    obs.dates.push_back(date);
    for (std::size_t s = 0; s < symbol_cols.size(); ++s) {
      const std::string& cell = (*fields)[symbol_cols[s]];
      if (IsMissing(cell)) continue;
      obs.cells[s][date] = CheckedPrice(cell, line_no, obs.symbols[s], date);
    }
  }
  if (header.empty()) ParseFail(1, "missing header row");
  return obs;
}

Observations ReadLong(std::istream& in, const PriceSchema& schema) {
  Observations obs;
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  std::size_t date_col = 0, symbol_col = 0, close_col = 0;
  std::map<std::string, std::size_t> symbol_index;
  std::set<std::string> seen_dates;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    auto fields = SplitCsvLine(line);
    if (!fields) ParseFail(line_no, "unterminated quote");
    if (header.empty()) {
      header = *fields;
      date_col = ColumnIndex(header, schema.date_column);
      symbol_col = ColumnIndex(header, schema.symbol_column);
      close_col = ColumnIndex(header, schema.close_column);
      continue;
    }
    if (fields->size() != header.size()) {
      ParseFail(line_no, "expected " + std::to_string(header.size()) +
                             " fields, got " + std::to_string(fields->size()));
    }
    const std::string& date = (*fields)[date_col];
    const std::string& symbol = (*fields)[symbol_col];
    if (date.empty()) ParseFail(line_no, "empty date");
    if (symbol.empty()) ParseFail(line_no, "empty symbol");
    auto [it, inserted] = symbol_index.emplace(symbol, obs.symbols.size());
    if (inserted) {
      obs.symbols.push_back(symbol);
      obs.cells.emplace_back();
    }
    if (seen_dates.insert(date).second) obs.dates.push_back(date);
    const std::string& cell = (*fields)[close_col];
    if (IsMissing(cell)) continue;
    double price = CheckedPrice(cell, line_no, symbol, date);
    if (!obs.cells[it->second].emplace(date, price).second) {
      throw Error(ErrorKind::kData, "duplicate row for symbol " + symbol +
                                        " on " + date + " at line " +
                                        std::to_string(line_no));
    }
  }
  if (header.empty()) ParseFail(1, "missing header row");
  return obs;
}

}  // namespace

PriceTable PriceTable::Create(std::vector<std::string> symbols,
                              std::vector<std::string> dates,
                              Eigen::MatrixXd prices) {
  if (symbols.empty()) throw Error(ErrorKind::kShape, "price table has no symbols");
  if (prices.rows() != static_cast<Eigen::Index>(dates.size()) ||
      prices.cols() != static_cast<Eigen::Index>(symbols.size())) {
    throw Error(ErrorKind::kShape, "price matrix shape does not match labels");
  }
  const bool numeric = AllIntegerLabels(dates);
  for (std::size_t t = 1; t < dates.size(); ++t) {
    if (!DateLess(dates[t - 1], dates[t], numeric)) {
      throw Error(ErrorKind::kData, "dates not strictly increasing at " + dates[t]);
    }
  }
  for (Eigen::Index t = 0; t < prices.rows(); ++t) {
    for (Eigen::Index i = 0; i < prices.cols(); ++i) {
      double p = prices(t, i);
      if (!(p > 0.0) || !std::isfinite(p)) {
        throw Error(ErrorKind::kData,
                    "non-positive price for symbol " +
                        symbols[static_cast<std::size_t>(i)] + " on " +
                        dates[static_cast<std::size_t>(t)]);
      }
    }
  }
  PriceTable table;
  table.symbols_ = std::move(symbols);
  table.dates_ = std::move(dates);
  table.prices_ = std::move(prices);
  return table;
}

LoadResult LoadPriceTable(std::istream& in, const PriceSchema& schema) {
  if (!(schema.min_coverage >= 0.0 && schema.min_coverage <= 1.0)) {
    throw Error(ErrorKind::kUsage, "min_coverage must lie in [0, 1]");
  }
  Observations obs = schema.layout == CsvLayout::kWide ? ReadWide(in, schema)
                                                       : ReadLong(in, schema);
  if (obs.dates.empty() || obs.symbols.empty()) {
    throw Error(ErrorKind::kAlignment, "input has no observations");
  }

  std::vector<Exclusion> excluded;
  std::vector<std::size_t> kept;
  const double total = static_cast<double>(obs.dates.size());
  for (std::size_t s = 0; s < obs.symbols.size(); ++s) {
    double coverage = static_cast<double>(obs.cells[s].size()) / total;
    if (coverage < schema.min_coverage) {
      excluded.push_back({obs.symbols[s], coverage});
    } else {
      kept.push_back(s);
    }
  }
  if (kept.empty()) {
    throw Error(ErrorKind::kAlignment, "every symbol is below the coverage threshold");
  }

  // Inner join on dates across retained symbols.
  std::vector<std::string> dates;
  for (const auto& d : obs.dates) {
    bool all = std::all_of(kept.begin(), kept.end(), [&](std::size_t s) {
      return obs.cells[s].count(d) > 0;
    });
    if (all) dates.push_back(d);
  }
  if (dates.empty()) {
    throw Error(ErrorKind::kAlignment, "retained symbols share no dates");
  }
  const bool numeric = AllIntegerLabels(dates);
  std::sort(dates.begin(), dates.end(), [numeric](const auto& a, const auto& b) {
    return DateLess(a, b, numeric);
  });

  std::vector<std::string> symbols;
  Eigen::MatrixXd prices(static_cast<Eigen::Index>(dates.size()),
                         static_cast<Eigen::Index>(kept.size()));
  for (std::size_t c = 0; c < kept.size(); ++c) {
    symbols.push_back(obs.symbols[kept[c]]);
    for (std::size_t t = 0; t < dates.size(); ++t) {
      prices(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(c)) =
          obs.cells[kept[c]].at(dates[t]);
    }
  }
  return LoadResult{PriceTable::Create(std::move(symbols), std::move(dates),
                                       std::move(prices)),
                    std::move(excluded)};
}

LoadResult LoadPriceTableFile(const std::string& path, const PriceSchema& schema) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kUsage, "cannot open input '" + path + "'");
  return LoadPriceTable(in, schema);
}

std::string ExclusionReportJson(const std::vector<Exclusion>& excluded) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& e : excluded) {
    out.push_back({{"symbol", e.symbol}, {"coverage", e.coverage}});
  }
  return out.dump();
}

ReturnTable ComputeLogReturns(const PriceTable& prices) {
  const std::size_t rows = prices.num_dates();
  if (rows < 2) {
    throw Error(ErrorKind::kInsufficientData, "need at least 2 prices for returns");
  }
  const Eigen::MatrixXd logs = prices.prices().array().log().matrix();
  const auto n = static_cast<Eigen::Index>(rows - 1);
  Eigen::MatrixXd returns = logs.bottomRows(n) - logs.topRows(n);
  std::vector<std::string> dates(prices.dates().begin() + 1, prices.dates().end());
  return ReturnTable(prices.symbols(), std::move(dates), std::move(returns));
}

WindowView::WindowView(const ReturnTable& table, std::size_t start,
                       std::size_t length)
    : table_(&table), start_(start), length_(length) {
  if (length < 2 || start + length > table.length()) {
    throw Error(ErrorKind::kInsufficientData,
                "window [" + std::to_string(start) + ", " +
                    std::to_string(start + length) + ") does not fit " +
                    std::to_string(table.length()) + " returns");
  }
}

std::size_t WindowCount(std::size_t total, std::size_t length, std::size_t stride) {
  if (stride == 0 || length == 0 || length > total) return 0;
  return (total - length) / stride + 1;
}

std::vector<WindowView> WindowSlices(const ReturnTable& returns, std::size_t length,
                                     std::size_t stride) {
  if (stride < 1) throw Error(ErrorKind::kUsage, "stride must be >= 1");
  if (length < 2) throw Error(ErrorKind::kUsage, "window length must be >= 2");
  if (length > returns.length()) {
    throw Error(ErrorKind::kInsufficientData,
                "window of " + std::to_string(length) + " exceeds " +
                    std::to_string(returns.length()) + " returns");
  }
  std::vector<WindowView> out;
  const std::size_t count = WindowCount(returns.length(), length, stride);
  out.reserve(count);
  for (std::size_t w = 0; w < count; ++w) out.emplace_back(returns, w * stride, length);
  return out;
}

}  // namespace crashlens
