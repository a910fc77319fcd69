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

#include "crashlens/synthetic.h"

#include <cmath>
#include <cstdio>
#include <random>

#include "crashlens/error.h"

namespace crashlens {

PriceTable GenerateSyntheticMarket(const SyntheticMarket& market) {
  if (market.assets < 1 || market.days < 2) {
    throw Error(ErrorKind::kUsage, "synthetic market needs assets and at least 2 days");
  }
  if (!(market.loading >= 0.0 && market.loading <= 1.0) ||
      !(market.crash_loading >= 0.0 && market.crash_loading <= 1.0)) {
    throw Error(ErrorKind::kUsage, "factor loadings must lie in [0, 1]");
  }
  std::mt19937_64 rng(market.seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  const auto rows = static_cast<Eigen::Index>(market.days);
  const auto cols = static_cast<Eigen::Index>(market.assets);
  Eigen::MatrixXd prices(rows, cols);
  prices.row(0).setConstant(market.initial_price);
  for (Eigen::Index t = 1; t < rows; ++t) {
    const auto r = static_cast<std::size_t>(t - 1);  // return index
    const bool crash = r >= market.crash_start && r < market.crash_start + market.crash_length;
    const double beta = crash ? market.crash_loading : market.loading;
    const double idio = std::sqrt(1.0 - beta * beta);
    const double factor = normal(rng) - (crash ? market.crash_drift : 0.0);
    for (Eigen::Index i = 0; i < cols; ++i) {
      const double ret = market.volatility * (beta * factor + idio * normal(rng));
      prices(t, i) = prices(t - 1, i) * std::exp(ret);
    }
  }

  std::vector<std::string> symbols;
  char buf[32];
  for (std::size_t i = 0; i < market.assets; ++i) {
    std::snprintf(buf, sizeof(buf), "S%02zu", i + 1);
    symbols.emplace_back(buf);
  }
  std::vector<std::string> dates;
  for (std::size_t t = 0; t < market.days; ++t) {
    std::snprintf(buf, sizeof(buf), "d%05zu", t);
    dates.emplace_back(buf);
  }
  return PriceTable::Create(std::move(symbols), std::move(dates), std::move(prices));
}

std::string PriceTableCsv(const PriceTable& table) {
  std::string out = "date";
  for (const auto& s : table.symbols()) out += "," + s;
  out += "\n";
  char buf[40];
  for (std::size_t t = 0; t < table.num_dates(); ++t) {
    out += table.dates()[t];
    for (std::size_t i = 0; i < table.num_assets(); ++i) {
      std::snprintf(buf, sizeof(buf), ",%.17g",
                    table.prices()(static_cast<Eigen::Index>(t),
                                   static_cast<Eigen::Index>(i)));
      out += buf;
    }
    out += "\n";
  }
  return out;
}

}  // namespace crashlens
