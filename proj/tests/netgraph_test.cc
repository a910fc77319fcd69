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

#include "crashlens/netgraph.h"

#include <algorithm>
#include <functional>
#include <iterator>
#include <random>
#include <regex>
#include <set>
#include <tuple>
#include <vector>

#include <gtest/gtest.h>

#include "crashlens/error.h"
#include "oracles.h"

namespace crashlens {
namespace {

Labels Names(std::size_t m) {
  Labels l;
  for (std::size_t i = 0; i < m; ++i) l.push_back(std::string(1, static_cast<char>('A' + i)));
  return l;
}

MarketGraph Unit(std::size_t m, const std::vector<std::pair<std::size_t, std::size_t>>& e) {
  std::vector<Edge> edges;
  for (auto [u, v] : e) edges.push_back({u, v, 1.0});
  return MarketGraph::Create(Names(m), edges);
}

MarketGraph Star4() { return Unit(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}}); }
MarketGraph K4() { return Unit(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}); }
MarketGraph Path3() { return Unit(3, {{0, 1}, {1, 2}}); }

ErrorKind KindOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::kInternal;
}

CorrelationMatrix RandomC(std::size_t m, std::mt19937_64& rng) {
  return CorrelationMatrix::Create(Names(m), oracle::RandomCorrelation(m, rng));
}

TEST(MarketGraph, CreateNormalizesAndValidates) {
  const MarketGraph g = MarketGraph::Create(Names(3), {{2, 0, 1.0}, {1, 0, 2.0}});
  EXPECT_EQ(g.edges()[0], (Edge{0, 1, 2.0}));
  EXPECT_EQ(g.edges()[1], (Edge{0, 2, 1.0}));
  EXPECT_TRUE(g.HasEdge(2, 0));
  EXPECT_DOUBLE_EQ(g.TotalWeight(), 3.0);
  EXPECT_EQ(KindOf([] { MarketGraph::Create(Names(2), {{1, 1, 1.0}}); }), ErrorKind::kDomain);
  EXPECT_EQ(KindOf([] { MarketGraph::Create(Names(2), {{0, 1, 1.0}, {1, 0, 1.0}}); }),
            ErrorKind::kDomain);
  EXPECT_EQ(KindOf([] { MarketGraph::Create(Names(2), {{0, 1, -1.0}}); }), ErrorKind::kDomain);
}

TEST(Mst, ThreeVertices) {
  Eigen::MatrixXd d(3, 3);
  d << 0, 1, 2, 1, 0, 3, 2, 3, 0;
  const MarketGraph g = Mst(DistanceMatrix::Create(Names(3), d));
  EXPECT_EQ(g.num_edges(), 2u);
  EXPECT_TRUE(g.HasEdge(0, 1));
  EXPECT_TRUE(g.HasEdge(0, 2));
  EXPECT_DOUBLE_EQ(g.TotalWeight(), 3.0);
  EXPECT_EQ(g.kind(), GraphKind::kMst);
}

TEST(Mst, MatchesSpanningTreeEnumeration) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.1, 2.0);
  for (int trial = 0; trial < 40; ++trial) {
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(5, 5);
    for (int i = 0; i < 5; ++i) {
      for (int j = i + 1; j < 5; ++j) d(i, j) = d(j, i) = u(rng);
    }
    const MarketGraph g = Mst(DistanceMatrix::Create(Names(5), d));
    oracle::EdgeList e;
    for (const Edge& x : g.edges()) e.emplace_back(x.u, x.v);
    EXPECT_TRUE(oracle::IsSpanningTree(5, e));
    EXPECT_NEAR(g.TotalWeight(), oracle::BruteForceMstWeight(d), 1e-12);
  }
}

TEST(Pmfg, FourVerticesIsComplete) {
  std::mt19937_64 rng(1);
  const MarketGraph g = Pmfg(RandomC(4, rng));
  EXPECT_EQ(g.num_edges(), 6u);
  EXPECT_EQ(g.kind(), GraphKind::kPmfg);
}

TEST(Pmfg, FiveVerticesRejectsTheK5Edge) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const CorrelationMatrix c = RandomC(5, rng);
    // Candidate order by decreasing correlation; greedily replay it against
    // the five-vertex planarity oracle.
    std::vector<std::tuple<double, std::size_t, std::size_t>> cand;
    for (std::size_t i = 0; i < 5; ++i) {
      for (std::size_t j = i + 1; j < 5; ++j) cand.emplace_back(-c(i, j), i, j);
    }
    std::sort(cand.begin(), cand.end());
    oracle::EdgeList kept;
    for (auto [k, i, j] : cand) {
      kept.emplace_back(i, j);
      if (!oracle::PlanarOnFive(kept)) kept.pop_back();
    }
    const MarketGraph g = Pmfg(c);
    ASSERT_EQ(g.num_edges(), 9u);
    const auto [k, ri, rj] = cand.back();
    EXPECT_FALSE(g.HasEdge(ri, rj));
    for (auto [i, j] : kept) EXPECT_TRUE(g.HasEdge(i, j));
  }
}

TEST(Pmfg, FortyTwoVertices) {
  std::mt19937_64 rng(42);
  const MarketGraph g = Pmfg(RandomC(42, rng));
  EXPECT_EQ(g.num_edges(), 120u);
  EXPECT_TRUE(CertifyPlanar(g));
}

TEST(Pmfg, TooFewVertices) {
  std::mt19937_64 rng(3);
  EXPECT_EQ(KindOf([&] { Pmfg(RandomC(2, rng)); }), ErrorKind::kSize);
}

TEST(Pmfg, ContainsMstAndIsPlanar) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t m = 4 + static_cast<std::size_t>(trial) % 9;
    const CorrelationMatrix c = RandomC(m, rng);
    const MarketGraph p = Pmfg(c);
    const MarketGraph t = Mst(CorrelationDistance(c));
    EXPECT_EQ(p.num_edges(), 3 * (m - 2));
    EXPECT_TRUE(CertifyPlanar(p));
    for (const Edge& e : t.edges()) EXPECT_TRUE(p.HasEdge(e.u, e.v)) << m;
  }
}

TEST(Pmfg, DistanceOverloadAgreesOnPlainDistances) {
  std::mt19937_64 rng(6);
  const CorrelationMatrix c = RandomC(9, rng);
  EXPECT_EQ(Pmfg(c).edges(), Pmfg(CorrelationDistance(c)).edges());
}

TEST(Planarity, KnownGraphs) {
  std::vector<std::pair<std::size_t, std::size_t>> k5, k33;
  for (std::size_t i = 0; i < 5; ++i) {
    for (std::size_t j = i + 1; j < 5; ++j) k5.emplace_back(i, j);
  }
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 3; j < 6; ++j) k33.emplace_back(i, j);
  }
  EXPECT_FALSE(IsPlanar(5, k5));
  EXPECT_FALSE(IsPlanar(6, k33));
  k5.pop_back();
  k33.pop_back();
  EXPECT_TRUE(IsPlanar(5, k5));
  EXPECT_TRUE(IsPlanar(6, k33));
  EXPECT_TRUE(CertifyPlanar(K4()));
  EXPECT_TRUE(CertifyPlanar(Star4()));
  EXPECT_FALSE(CertifyPlanar(Unit(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {1, 2}, {1, 3}, {1, 4},
                                      {2, 3}, {2, 4}, {3, 4}})));
}

TEST(ShortestPaths, SmallCases) {
  EXPECT_DOUBLE_EQ(ShortestPathDistances(Path3())(0, 2), 2.0);
  const MarketGraph tri =
      MarketGraph::Create(Names(3), {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 3.0}});
  EXPECT_DOUBLE_EQ(ShortestPathDistances(tri)(0, 2), 2.0);
}

TEST(ShortestPaths, DisconnectedListsComponents) {
  try {
    ShortestPathDistances(Unit(4, {{0, 1}, {2, 3}}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kDisconnected);
    EXPECT_NE(std::string(e.what()).find("C"), std::string::npos) << e.what();
  }
}

TEST(ShortestPaths, MatchesSimplePathEnumeration) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 5; ++trial) {
    const MarketGraph g = Pmfg(RandomC(8, rng));
    std::vector<std::tuple<std::size_t, std::size_t, double>> e;
    for (const Edge& x : g.edges()) e.emplace_back(x.u, x.v, x.weight);
    const Eigen::MatrixXd want = oracle::BruteForcePaths(8, e);
    EXPECT_TRUE(ShortestPathDistances(g).isApprox(want, 1e-12));
    const auto c = ClosenessCentrality(g);
    const auto cw = oracle::ClosenessFromSums(want);
    for (std::size_t k = 0; k < 8; ++k) EXPECT_NEAR(c[k], cw[k], 1e-12);
  }
}

TEST(Closeness, AnalyticCases) {
  const auto p = ClosenessCentrality(Path3());
  EXPECT_NEAR(p[0], 1.0 / 3, 1e-15);
  EXPECT_NEAR(p[1], 1.0 / 2, 1e-15);
  EXPECT_NEAR(p[2], 1.0 / 3, 1e-15);
  for (double c : ClosenessCentrality(K4())) EXPECT_NEAR(c, 1.0 / 3, 1e-15);
  const auto s = ClosenessCentrality(Star4());
  EXPECT_NEAR(s[0], 1.0 / 4, 1e-15);
  for (std::size_t k = 1; k < 5; ++k) EXPECT_NEAR(s[k], 1.0 / 7, 1e-15);
}

TEST(Export, DotOneEdge) {
  const MarketGraph g = MarketGraph::Create({"X", "Y"}, {{0, 1, 0.5}});
  const std::string dot = ExportGraph(g, GraphFormat::kDot);
  const std::regex edge("n\\d+ -- n\\d+");
  EXPECT_EQ(std::distance(std::sregex_iterator(dot.begin(), dot.end(), edge),
                          std::sregex_iterator()),
            1);
  EXPECT_EQ(dot, ExportGraph(g, GraphFormat::kDot));
}

TEST(Export, GraphMlCounts) {
  const std::string xml = ExportGraph(K4(), GraphFormat::kGraphMl);
  auto count = [&](const std::string& tag) {
    std::size_t n = 0;
    for (auto p = xml.find(tag); p != std::string::npos; p = xml.find(tag, p + 1)) ++n;
    return n;
  };
  EXPECT_EQ(count("<node "), 4u);
  EXPECT_EQ(count("<edge "), 6u);
}

TEST(Export, JsonAndFormatNames) {
  const std::string j = ExportGraph(Path3(), GraphFormat::kJson);
  EXPECT_NE(j.find("\"edges\""), std::string::npos);
  EXPECT_EQ(ParseGraphFormat("graphml"), GraphFormat::kGraphMl);
  EXPECT_EQ(KindOf([] { ParseGraphFormat("png"); }), ErrorKind::kUsage);
  EXPECT_EQ(ParseGraphKind("pmfg"), GraphKind::kPmfg);
}

}  // namespace
}  // namespace crashlens
