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

#ifndef CRASHLENS_MARKETDATA_H_
#define CRASHLENS_MARKETDATA_H_

#include <cstddef>
#include <istream>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace crashlens {

enum class CsvLayout {
  kWide,  // date,SYM1,SYM2,...
  kLong,  // date,symbol,close
};

struct PriceSchema {
  CsvLayout layout = CsvLayout::kWide;
  std::string date_column = "date";
  std::string symbol_column = "symbol";  // long layout only
  std::string close_column = "close";    // long layout only
  // Symbols present on fewer than this fraction of all dates are dropped.
  double min_coverage = 0.9;
};

struct Exclusion {
  std::string symbol;
  double coverage = 0.0;
};

// Close prices, one column per asset, rows ordered by date. Immutable once
// built; Create() enforces positivity, strictly increasing dates and shape.
class PriceTable {
 public:
  static PriceTable Create(std::vector<std::string> symbols,
                           std::vector<std::string> dates,
                           Eigen::MatrixXd prices);

  const std::vector<std::string>& symbols() const { return symbols_; }
  const std::vector<std::string>& dates() const { return dates_; }
  const Eigen::MatrixXd& prices() const { return prices_; }
  std::size_t num_dates() const { return dates_.size(); }
  std::size_t num_assets() const { return symbols_.size(); }

 private:
  PriceTable() = default;

  std::vector<std::string> symbols_;
  std::vector<std::string> dates_;
  Eigen::MatrixXd prices_;  // (T, m)
};

struct LoadResult {
  PriceTable table;
  std::vector<Exclusion> excluded;
};

LoadResult LoadPriceTable(std::istream& in, const PriceSchema& schema);
LoadResult LoadPriceTableFile(const std::string& path,
                              const PriceSchema& schema);

// JSON list of {symbol, coverage}.
std::string ExclusionReportJson(const std::vector<Exclusion>& excluded);

class ReturnTable {
 public:
  ReturnTable(std::vector<std::string> symbols, std::vector<std::string> dates,
              Eigen::MatrixXd returns)
      : symbols_(std::move(symbols)),
        dates_(std::move(dates)),
        returns_(std::move(returns)) {}

  const std::vector<std::string>& symbols() const { return symbols_; }
  // dates()[t] labels the return from price row t to row t+1, i.e. the date
  // of price row t+1.
  const std::vector<std::string>& dates() const { return dates_; }
  const Eigen::MatrixXd& returns() const { return returns_; }
  std::size_t length() const { return static_cast<std::size_t>(returns_.rows()); }
  std::size_t num_assets() const { return symbols_.size(); }

 private:
  std::vector<std::string> symbols_;
  std::vector<std::string> dates_;
  Eigen::MatrixXd returns_;  // (T-1, m)
};

// returns[t][i] = ln(prices[t+1][i]) - ln(prices[t][i]).
ReturnTable ComputeLogReturns(const PriceTable& prices);

// A [start, start + length) row slice of a ReturnTable. Holds a pointer to
// the table, which must outlive the view.
class WindowView {
 public:
  WindowView(const ReturnTable& table, std::size_t start, std::size_t length);

  std::size_t start() const { return start_; }
  std::size_t length() const { return length_; }
  const ReturnTable& table() const { return *table_; }
  Eigen::Block<const Eigen::MatrixXd> values() const {
    return table_->returns().middleRows(static_cast<Eigen::Index>(start_),
                                        static_cast<Eigen::Index>(length_));
  }

 private:
  const ReturnTable* table_;
  std::size_t start_;
  std::size_t length_;
};

// Number of windows of `length` that fit in `total` samples at `stride`.
std::size_t WindowCount(std::size_t total, std::size_t length,
                        std::size_t stride);

std::vector<WindowView> WindowSlices(const ReturnTable& returns,
                                     std::size_t length, std::size_t stride);

}  // namespace crashlens

#endif  // CRASHLENS_MARKETDATA_H_
