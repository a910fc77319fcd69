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

#ifndef CRASHLENS_SYNTHETIC_H_
#define CRASHLENS_SYNTHETIC_H_

#include <cstddef>
#include <cstdint>
#include <string>

#include "crashlens/marketdata.h"

namespace crashlens {

// One-factor market of geometric random walks with an injected crash regime.
// Outside the regime r_i = vol * (b f + sqrt(1 - b^2) e_i) with b = loading;
// inside it the loading rises to crash_loading and the factor shocks are
// drawn with mean -crash_drift.
struct SyntheticMarket {
  std::size_t assets = 42;
  std::size_t days = 2001;  // price rows
  double loading = 0.3;
  double crash_loading = 0.9;
  std::size_t crash_start = 272;  // return index
  std::size_t crash_length = 15;
  double crash_drift = 1.0;  // in factor standard deviations
  double volatility = 0.02;
  double initial_price = 100.0;
  std::uint64_t seed = 2008;
};

PriceTable GenerateSyntheticMarket(const SyntheticMarket& market);

// Wide CSV with `date` labels d00000, d00001, ...
std::string PriceTableCsv(const PriceTable& table);

}  // namespace crashlens

#endif  // CRASHLENS_SYNTHETIC_H_
