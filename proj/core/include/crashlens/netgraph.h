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

#ifndef CRASHLENS_NETGRAPH_H_
#define CRASHLENS_NETGRAPH_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "crashlens/corrnet.h"

namespace crashlens {

enum class GraphKind { kMst, kPmfg, kCustom };

std::string_view GraphKindName(GraphKind kind);
GraphKind ParseGraphKind(std::string_view name);

struct Edge {
  std::size_t u = 0;  // u < v
  std::size_t v = 0;
  double weight = 0.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

// Weighted undirected simple graph over labeled vertices 0..m-1. Edges are
// kept normalized (u < v) and sorted by (u, v).
class MarketGraph {
 public:
  // Throws kDomain on self-loops, duplicate edges, out-of-range endpoints or
  // negative weights.
  static MarketGraph Create(Labels labels, std::vector<Edge> edges,
                            GraphKind kind = GraphKind::kCustom);

  const Labels& labels() const { return labels_; }
  const std::vector<Edge>& edges() const { return edges_; }
  GraphKind kind() const { return kind_; }
  std::size_t num_vertices() const { return labels_.size(); }
  std::size_t num_edges() const { return edges_.size(); }
  bool HasEdge(std::size_t u, std::size_t v) const;
  double TotalWeight() const;

 private:
  MarketGraph() = default;

  Labels labels_;
  std::vector<Edge> edges_;
  GraphKind kind_ = GraphKind::kCustom;
};

// Kruskal over edges sorted by (weight, min index, max index).
MarketGraph Mst(const DistanceMatrix& d);

// Planar maximally filtered graph: candidate edges in decreasing correlation
// (ties by lower then higher index), each kept iff the graph stays planar,
// stopping at 3(m - 2) edges. Weights are d = sqrt(2 (1 - rho)).
MarketGraph Pmfg(const CorrelationMatrix& c);

// Same construction ordered by increasing distance instead; used when the
// distances do not come from plain correlations (e.g. hyperbolic map).
MarketGraph Pmfg(const DistanceMatrix& d);

// Boyer-Myrvold planarity test on the edge set.
bool IsPlanar(std::size_t num_vertices,
              const std::vector<std::pair<std::size_t, std::size_t>>& edges);

// Computes a combinatorial embedding and verifies it independently by face
// tracing against Euler's formula V - E + F = 1 + components. False when the
// graph is not planar or the embedding does not check out.
bool CertifyPlanar(const MarketGraph& g);

// All-pairs weighted shortest-path distances. Throws kDisconnected listing
// the components when some pair is unreachable.
Eigen::MatrixXd ShortestPathDistances(const MarketGraph& g);

// C(k) = 1 / sum_{h != k} d_G(h, k), indexed by vertex.
std::vector<double> ClosenessCentrality(const MarketGraph& g);
std::vector<double> ClosenessFromDistances(const Eigen::MatrixXd& paths);

enum class GraphFormat { kDot, kGraphMl, kJson };

// Throws kUsage for an unknown name ("dot", "graphml", "json").
GraphFormat ParseGraphFormat(std::string_view name);

// Deterministic: vertices in index order, edges in (u, v) order, weights
// with 9 significant digits.
std::string ExportGraph(const MarketGraph& g, GraphFormat format);

}  // namespace crashlens

#endif  // CRASHLENS_NETGRAPH_H_
