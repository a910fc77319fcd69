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
#include <cctype>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <tuple>
#include <utility>

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/boyer_myrvold_planar_test.hpp>
#include <nlohmann/json.hpp>

#include "crashlens/error.h"

namespace crashlens {
namespace {

using SimpleGraph =
    boost::adjacency_list<boost::vecS, boost::vecS, boost::undirectedS>;
using IndexedGraph =
    boost::adjacency_list<boost::vecS, boost::vecS, boost::undirectedS,
                          boost::property<boost::vertex_index_t, int>,
                          boost::property<boost::edge_index_t, int>>;

// Graphs with fewer than 9 edges cannot contain a K5 or K3,3 subdivision.
constexpr std::size_t kAlwaysPlanarEdges = 8;

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  std::size_t Find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  bool Union(std::size_t a, std::size_t b) {
    a = Find(a);
    b = Find(b);
    if (a == b) return false;
    parent_[std::max(a, b)] = std::min(a, b);
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
};

struct Candidate {
  double key;
  std::size_t u, v;
};

void SortCandidates(std::vector<Candidate>& c) {
  std::sort(c.begin(), c.end(), [](const Candidate& a, const Candidate& b) {
    return std::tie(a.key, a.u, a.v) < std::tie(b.key, b.u, b.v);
  });
}

MarketGraph GreedyPlanar(const Labels& labels, std::vector<Candidate> order,
                         const Eigen::MatrixXd& weights) {
  const std::size_t m = labels.size();
  if (m < 3) throw Error(ErrorKind::kSize, "PMFG needs at least 3 vertices");
  SortCandidates(order);
  const std::size_t target = 3 * (m - 2);

  SimpleGraph g(m);
  std::vector<std::size_t> degree(m, 0);
  std::vector<Edge> kept;
  kept.reserve(target);
  for (const Candidate& c : order) {
    if (kept.size() == target) break;
    auto added = boost::add_edge(c.u, c.v, g).first;
    // A new pendant vertex never breaks planarity.
    const bool trivially_planar = kept.size() + 1 <= kAlwaysPlanarEdges ||
                                  degree[c.u] == 0 || degree[c.v] == 0;
    if (!trivially_planar && !boost::boyer_myrvold_planarity_test(g)) {
      boost::remove_edge(added, g);
      continue;
    }
    ++degree[c.u];
    ++degree[c.v];
    kept.push_back({c.u, c.v,
                    weights(static_cast<Eigen::Index>(c.u), static_cast<Eigen::Index>(c.v))});
  }
  return MarketGraph::Create(labels, std::move(kept), GraphKind::kPmfg);
}

std::string FormatWeight(double w) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", w);
  return buf;
}

std::string EscapeQuoted(const std::string& s) {
  std::string out;
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out.push_back('\\');
    out.push_back(ch);
  }
  return out;
}

std::string EscapeXml(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out.push_back(ch);
    }
  }
  return out;
}

std::string Lower(std::string_view s) {
  std::string out(s);
  for (char& ch : out) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return out;
}

std::string ComponentList(const MarketGraph& g, DisjointSets& sets) {
  std::vector<std::vector<std::size_t>> groups(g.num_vertices());
  for (std::size_t v = 0; v < g.num_vertices(); ++v) groups[sets.Find(v)].push_back(v);
  std::string out;
  for (const auto& group : groups) {
    if (group.empty()) continue;
    out += " {";
    for (std::size_t i = 0; i < group.size(); ++i) {
      if (i) out += ",";
      out += g.labels()[group[i]];
    }
    out += "}";
  }
  return out;
}

}  // namespace

std::string_view GraphKindName(GraphKind kind) {
  switch (kind) {
    case GraphKind::kMst: return "MST";
    case GraphKind::kPmfg: return "PMFG";
    case GraphKind::kCustom: return "CUSTOM";
  }
  return "CUSTOM";
}

GraphKind ParseGraphKind(std::string_view name) {
  const std::string lower = Lower(name);
  if (lower == "mst") return GraphKind::kMst;
  if (lower == "pmfg") return GraphKind::kPmfg;
  if (lower == "custom") return GraphKind::kCustom;
  throw Error(ErrorKind::kUsage, "unknown graph kind '" + std::string(name) + "'");
}

MarketGraph MarketGraph::Create(Labels labels, std::vector<Edge> edges, GraphKind kind) {
  const std::size_t m = labels.size();
  for (Edge& e : edges) {
    if (e.u == e.v) throw Error(ErrorKind::kDomain, "self-loop at " + std::to_string(e.u));
    if (e.u >= m || e.v >= m) throw Error(ErrorKind::kDomain, "edge endpoint out of range");
    if (!(e.weight >= 0.0) || !std::isfinite(e.weight)) {
      throw Error(ErrorKind::kDomain, "edge weight must be finite and non-negative");
    }
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return std::tie(a.u, a.v) < std::tie(b.u, b.v);
  });
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (edges[i].u == edges[i - 1].u && edges[i].v == edges[i - 1].v) {
      throw Error(ErrorKind::kDomain, "duplicate edge (" + labels[edges[i].u] + ", " +
                                          labels[edges[i].v] + ")");
    }
  }
  MarketGraph g;
  g.labels_ = std::move(labels);
  g.edges_ = std::move(edges);
  g.kind_ = kind;
  return g;
}

bool MarketGraph::HasEdge(std::size_t u, std::size_t v) const {
  if (u > v) std::swap(u, v);
  return std::binary_search(edges_.begin(), edges_.end(), Edge{u, v, 0.0},
                            [](const Edge& a, const Edge& b) {
                              return std::tie(a.u, a.v) < std::tie(b.u, b.v);
                            });
}

double MarketGraph::TotalWeight() const {
  double sum = 0.0;
  for (const Edge& e : edges_) sum += e.weight;
  return sum;
}

MarketGraph Mst(const DistanceMatrix& d) {
  const std::size_t m = d.size();
  if (m < 2) throw Error(ErrorKind::kSize, "MST needs at least 2 vertices");
  std::vector<Candidate> order;
  order.reserve(m * (m - 1) / 2);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) order.push_back({d(i, j), i, j});
  }
  SortCandidates(order);
  DisjointSets sets(m);
  std::vector<Edge> edges;
  for (const Candidate& c : order) {
    if (sets.Union(c.u, c.v)) {
      edges.push_back({c.u, c.v, c.key});
      if (edges.size() == m - 1) break;
    }
  }
  return MarketGraph::Create(d.labels(), std::move(edges), GraphKind::kMst);
}

MarketGraph Pmfg(const CorrelationMatrix& c) {
  const std::size_t m = c.size();
  std::vector<Candidate> order;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) order.push_back({-c(i, j), i, j});
  }
  return GreedyPlanar(c.labels(), std::move(order), CorrelationDistance(c).values());
}

MarketGraph Pmfg(const DistanceMatrix& d) {
  const std::size_t m = d.size();
  std::vector<Candidate> order;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) order.push_back({d(i, j), i, j});
  }
  return GreedyPlanar(d.labels(), std::move(order), d.values());
}

bool IsPlanar(std::size_t num_vertices,
              const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  SimpleGraph g(num_vertices);
  for (const auto& [u, v] : edges) boost::add_edge(u, v, g);
  return boost::boyer_myrvold_planarity_test(g);
}

bool CertifyPlanar(const MarketGraph& g) {
  const std::size_t n = g.num_vertices();
  IndexedGraph bg(n);
  int edge_id = 0;
  for (const Edge& e : g.edges()) {
    boost::add_edge(e.u, e.v, edge_id++, bg);
  }
  using EdgeDesc = boost::graph_traits<IndexedGraph>::edge_descriptor;
  std::vector<std::vector<EdgeDesc>> embedding(n);
  if (n == 0) return true;
  const bool planar = boost::boyer_myrvold_planarity_test(
      boost::boyer_myrvold_params::graph = bg,
      boost::boyer_myrvold_params::embedding = embedding.data());
  if (!planar) return false;

  // Rotation system: neighbours of each vertex in embedding order.
  std::vector<std::vector<std::size_t>> rotation(n);
  for (std::size_t v = 0; v < n; ++v) {
    for (const EdgeDesc& e : embedding[v]) {
      const std::size_t s = boost::source(e, bg);
      const std::size_t t = boost::target(e, bg);
      rotation[v].push_back(s == v ? t : s);
    }
    std::vector<std::size_t> sorted = rotation[v];
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::size_t> expected;
    for (const Edge& e : g.edges()) {
      if (e.u == v) expected.push_back(e.v);
      if (e.v == v) expected.push_back(e.u);
    }
    std::sort(expected.begin(), expected.end());
    if (sorted != expected) return false;
  }

  // Trace faces: dart (u -> v) is followed by (v -> w), w the successor of u
  // in v's rotation.
  std::vector<std::vector<std::size_t>> position(n);
  for (std::size_t v = 0; v < n; ++v) {
    position[v].assign(n, 0);
    for (std::size_t k = 0; k < rotation[v].size(); ++k) position[v][rotation[v][k]] = k;
  }
  std::vector<std::vector<bool>> used(n);
  for (std::size_t v = 0; v < n; ++v) used[v].assign(rotation[v].size(), false);
  std::size_t faces = 0;
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t k = 0; k < rotation[u].size(); ++k) {
      if (used[u][k]) continue;
      ++faces;
      std::size_t a = u, slot = k;
      while (!used[a][slot]) {
        used[a][slot] = true;
        const std::size_t b = rotation[a][slot];
        const std::size_t back = position[b][a];
        slot = (back + 1) % rotation[b].size();
        a = b;
      }
    }
  }

  DisjointSets sets(n);
  for (const Edge& e : g.edges()) sets.Union(e.u, e.v);
  std::size_t touched = 0, components = 0;
  for (std::size_t v = 0; v < n; ++v) {
    if (rotation[v].empty()) continue;
    ++touched;
    if (sets.Find(v) == v) ++components;
  }
  const auto euler = static_cast<long long>(touched) -
                     static_cast<long long>(g.num_edges()) +
                     static_cast<long long>(faces);
  return euler == 2 * static_cast<long long>(components);
}

Eigen::MatrixXd ShortestPathDistances(const MarketGraph& g) {
  const auto n = static_cast<Eigen::Index>(g.num_vertices());
  const double inf = std::numeric_limits<double>::infinity();
  Eigen::MatrixXd dist = Eigen::MatrixXd::Constant(n, n, inf);
  dist.diagonal().setZero();
  for (const Edge& e : g.edges()) {
    const auto u = static_cast<Eigen::Index>(e.u);
    const auto v = static_cast<Eigen::Index>(e.v);
    dist(u, v) = std::min(dist(u, v), e.weight);
    dist(v, u) = dist(u, v);
  }
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double dik = dist(i, k);
      if (dik == inf) continue;
      for (Eigen::Index j = 0; j < n; ++j) {
        const double through = dik + dist(k, j);
        if (through < dist(i, j)) dist(i, j) = through;
      }
    }
  }
  if (!dist.allFinite()) {
    DisjointSets sets(g.num_vertices());
    for (const Edge& e : g.edges()) sets.Union(e.u, e.v);
    throw Error(ErrorKind::kDisconnected,
                "graph is disconnected; components:" + ComponentList(g, sets));
  }
  return dist;
}

std::vector<double> ClosenessFromDistances(const Eigen::MatrixXd& paths) {
  const Eigen::Index n = paths.rows();
  if (n < 2) throw Error(ErrorKind::kSize, "closeness needs at least 2 vertices");
  std::vector<double> out(static_cast<std::size_t>(n));
  for (Eigen::Index k = 0; k < n; ++k) {
    double sum = 0.0;
    for (Eigen::Index h = 0; h < n; ++h) {
      if (h != k) sum += paths(h, k);
    }
    out[static_cast<std::size_t>(k)] = 1.0 / sum;
  }
  return out;
}

std::vector<double> ClosenessCentrality(const MarketGraph& g) {
  return ClosenessFromDistances(ShortestPathDistances(g));
}

GraphFormat ParseGraphFormat(std::string_view name) {
  const std::string lower = Lower(name);
  if (lower == "dot") return GraphFormat::kDot;
  if (lower == "graphml") return GraphFormat::kGraphMl;
  if (lower == "json") return GraphFormat::kJson;
  throw Error(ErrorKind::kUsage, "unknown graph format '" + std::string(name) +
                                     "' (expected dot, graphml or json)");
}

std::string ExportGraph(const MarketGraph& g, GraphFormat format) {
  std::string out;
  switch (format) {
    case GraphFormat::kDot: {
      out += "graph \"" + std::string(GraphKindName(g.kind())) + "\" {\n";
      for (std::size_t v = 0; v < g.num_vertices(); ++v) {
        out += "  n" + std::to_string(v) + " [label=\"" + EscapeQuoted(g.labels()[v]) +
               "\"];\n";
      }
      for (const Edge& e : g.edges()) {
        out += "  n" + std::to_string(e.u) + " -- n" + std::to_string(e.v) +
               " [weight=" + FormatWeight(e.weight) + "];\n";
      }
      out += "}\n";
      break;
    }
    case GraphFormat::kGraphMl: {
      out +=
          "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
          "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
          "  <key id=\"label\" for=\"node\" attr.name=\"label\" attr.type=\"string\"/>\n"
          "  <key id=\"weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"double\"/>\n";
      out += "  <graph id=\"" + std::string(GraphKindName(g.kind())) +
             "\" edgedefault=\"undirected\">\n";
      for (std::size_t v = 0; v < g.num_vertices(); ++v) {
        out += "    <node id=\"n" + std::to_string(v) + "\"><data key=\"label\">" +
               EscapeXml(g.labels()[v]) + "</data></node>\n";
      }
      for (const Edge& e : g.edges()) {
        out += "    <edge source=\"n" + std::to_string(e.u) + "\" target=\"n" +
               std::to_string(e.v) + "\"><data key=\"weight\">" +
               FormatWeight(e.weight) + "</data></edge>\n";
      }
      out += "  </graph>\n</graphml>\n";
      break;
    }
    case GraphFormat::kJson: {
      nlohmann::ordered_json j;
      j["kind"] = GraphKindName(g.kind());
      j["vertices"] = g.labels();
      j["edges"] = nlohmann::ordered_json::array();
      for (const Edge& e : g.edges()) {
        j["edges"].push_back({{"u", e.u},
                              {"v", e.v},
                              {"source", g.labels()[e.u]},
                              {"target", g.labels()[e.v]},
                              {"weight", std::stod(FormatWeight(e.weight))}});
      }
      out = j.dump(2) + "\n";
      break;
    }
  }
  return out;
}

}  // namespace crashlens
