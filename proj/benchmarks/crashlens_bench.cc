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

#include <random>
#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "crashlens/corrnet.h"
#include "crashlens/decompose.h"
#include "crashlens/netgraph.h"

namespace crashlens {
namespace {

std::vector<double> Walk(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::vector<double> x(n);
  double v = 0;
  for (auto& e : x) e = (v += g(rng));
  return x;
}

CorrelationMatrix Window(std::size_t m, std::size_t w, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::vector<std::vector<double>> s(m, std::vector<double>(w));
  Labels labels;
  for (std::size_t i = 0; i < m; ++i) {
    labels.push_back("S" + std::to_string(i));
    for (auto& v : s[i]) v = g(rng);
  }
  return CorrelationMatrixOf(s, labels);
}

void BM_Pmfg(benchmark::State& state) {
  const CorrelationMatrix c = Window(static_cast<std::size_t>(state.range(0)), 20, 1);
  for (auto _ : state) benchmark::DoNotOptimize(Pmfg(c));
}
BENCHMARK(BM_Pmfg)->Arg(12)->Arg(42)->Unit(benchmark::kMillisecond);

void BM_Mst(benchmark::State& state) {
  const DistanceMatrix d = CorrelationDistance(Window(static_cast<std::size_t>(state.range(0)), 20, 2));
  for (auto _ : state) benchmark::DoNotOptimize(Mst(d));
}
BENCHMARK(BM_Mst)->Arg(42)->Unit(benchmark::kMicrosecond);

void BM_Closeness(benchmark::State& state) {
  const MarketGraph g = Pmfg(Window(42, 20, 3));
  for (auto _ : state) benchmark::DoNotOptimize(ClosenessCentrality(g));
}
BENCHMARK(BM_Closeness)->Unit(benchmark::kMicrosecond);

void BM_Emd(benchmark::State& state) {
  const auto x = Walk(static_cast<std::size_t>(state.range(0)), 4);
  for (auto _ : state) benchmark::DoNotOptimize(Emd(x));
}
BENCHMARK(BM_Emd)->Arg(256)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_Itd(benchmark::State& state) {
  const auto x = Walk(static_cast<std::size_t>(state.range(0)), 5);
  for (auto _ : state) benchmark::DoNotOptimize(Itd(x));
}
BENCHMARK(BM_Itd)->Arg(2000)->Unit(benchmark::kMicrosecond);

void BM_TensorAverage(benchmark::State& state) {
  const CorrelationMatrix c = Window(42, 60, 6);
  for (auto _ : state) benchmark::DoNotOptimize(TensorAverageCorrelation(c, c));
}
BENCHMARK(BM_TensorAverage)->Unit(benchmark::kMicrosecond);

}  // namespace
}  // namespace crashlens

BENCHMARK_MAIN();
