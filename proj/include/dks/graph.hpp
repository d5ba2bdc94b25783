#pragma once

// Immutable undirected graphs over dense vertex ids [0, n), vertex sets, and
// the density queries every solver is scored with.

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "dks/error.hpp"

namespace dks {

using Vertex = std::uint32_t;

struct Edge {
  Vertex u;
  Vertex v;

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Sorted, duplicate-free list of vertex ids.
class VertexSet {
 public:
  VertexSet() = default;
  explicit VertexSet(std::vector<Vertex> members) : members_(std::move(members)) {
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
  }
  VertexSet(std::initializer_list<Vertex> members)
      : VertexSet(std::vector<Vertex>(members)) {}

  // {0, 1, ..., n-1}
  static VertexSet range(std::size_t n) {
    std::vector<Vertex> all(n);
    std::iota(all.begin(), all.end(), Vertex{0});
    return from_sorted(std::move(all));
  }

  // Caller guarantees sortedness and uniqueness.
  static VertexSet from_sorted(std::vector<Vertex> members) {
    VertexSet s;
    s.members_ = std::move(members);
    return s;
  }

  std::size_t size() const noexcept { return members_.size(); }
  bool empty() const noexcept { return members_.empty(); }
  bool contains(Vertex v) const {
    return std::binary_search(members_.begin(), members_.end(), v);
  }
  Vertex operator[](std::size_t i) const { return members_[i]; }
  auto begin() const noexcept { return members_.begin(); }
  auto end() const noexcept { return members_.end(); }
  const std::vector<Vertex>& members() const noexcept { return members_; }

  bool is_subset_of(const VertexSet& other) const {
    return std::includes(other.begin(), other.end(), begin(), end());
  }

  friend bool operator==(const VertexSet&, const VertexSet&) = default;
  friend auto operator<=>(const VertexSet& a, const VertexSet& b) {
    return a.members_ <=> b.members_;
  }

 private:
  std::vector<Vertex> members_;
};

inline VertexSet set_union(const VertexSet& a, const VertexSet& b) {
  std::vector<Vertex> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return VertexSet::from_sorted(std::move(out));
}

inline VertexSet set_intersection(const VertexSet& a, const VertexSet& b) {
  std::vector<Vertex> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(out));
  return VertexSet::from_sorted(std::move(out));
}

inline VertexSet set_difference(const VertexSet& a, const VertexSet& b) {
  std::vector<Vertex> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return VertexSet::from_sorted(std::move(out));
}

// Undirected simple graph in CSR form. Edges are normalized to u < v and
// deduplicated on construction (the first weight of a repeated edge wins).
// Optional per-edge weights are aligned with edges(); the optional
// bipartition assigns side 0 or 1 to every vertex.
class Graph {
 public:
  Graph() = default;

  explicit Graph(std::size_t n, std::vector<Edge> edges = {},
                 std::vector<double> weights = {},
                 std::vector<std::uint8_t> sides = {})
      : n_(n), sides_(std::move(sides)) {
    if (n > std::numeric_limits<Vertex>::max()) {
      throw InvalidArgument("graph: vertex count exceeds 32-bit ids");
    }
    if (!weights.empty() && weights.size() != edges.size()) {
      throw InvalidArgument("graph: weight count does not match edge count");
    }
    if (!sides_.empty() && sides_.size() != n) {
      throw InvalidArgument("graph: bipartition size does not match vertex count");
    }
    std::vector<std::size_t> order(edges.size());
    for (std::size_t i = 0; i < edges.size(); ++i) {
      auto& e = edges[i];
      if (e.u >= n || e.v >= n) {
        throw InvalidArgument("graph: edge endpoint out of range (" +
                              std::to_string(e.u) + ", " + std::to_string(e.v) + ")");
      }
      if (e.u == e.v) {
        throw InvalidArgument("graph: self-loop at vertex " + std::to_string(e.u));
      }
      if (e.u > e.v) std::swap(e.u, e.v);
      if (!weights.empty() && !(weights[i] > 0.0)) {
        throw InvalidArgument("graph: non-positive edge weight");
      }
      if (!sides_.empty() && sides_[e.u] == sides_[e.v]) {
        throw InvalidArgument("graph: edge inside one side of the bipartition");
      }
      order[i] = i;
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return edges[a] < edges[b]; });
    edges_.reserve(edges.size());
    for (std::size_t idx : order) {
      if (!edges_.empty() && edges_.back() == edges[idx]) continue;
      edges_.push_back(edges[idx]);
      if (!weights.empty()) weights_.push_back(weights[idx]);
    }
    build_adjacency();
  }

  std::size_t n() const noexcept { return n_; }
  std::size_t m() const noexcept { return edges_.size(); }

  std::span<const Vertex> neighbors(Vertex v) const {
    return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
  }
  std::size_t degree(Vertex v) const { return offsets_[v + 1] - offsets_[v]; }
  std::size_t max_degree() const noexcept { return max_degree_; }
  bool has_edge(Vertex u, Vertex v) const {
    auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
  }

  std::span<const Edge> edges() const noexcept { return edges_; }
  bool is_weighted() const noexcept { return !weights_.empty(); }
  std::span<const double> weights() const noexcept { return weights_; }
  bool has_bipartition() const noexcept { return !sides_.empty(); }
  std::uint8_t side(Vertex v) const { return sides_.at(v); }
  std::span<const std::uint8_t> sides() const noexcept { return sides_; }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.n_ == b.n_ && a.edges_ == b.edges_ && a.weights_ == b.weights_ &&
           a.sides_ == b.sides_;
  }

 private:
  void build_adjacency() {
    offsets_.assign(n_ + 1, 0);
    for (const auto& e : edges_) {
      ++offsets_[e.u + 1];
      ++offsets_[e.v + 1];
    }
    for (std::size_t i = 0; i < n_; ++i) offsets_[i + 1] += offsets_[i];
    adjacency_.resize(2 * edges_.size());
    std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
    for (const auto& e : edges_) {
      adjacency_[fill[e.u]++] = e.v;
      adjacency_[fill[e.v]++] = e.u;
    }
    for (std::size_t v = 0; v < n_; ++v) {
      std::sort(adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[v]),
                adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[v + 1]));
      max_degree_ = std::max(max_degree_, offsets_[v + 1] - offsets_[v]);
    }
  }

  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  std::vector<double> weights_;
  std::vector<std::uint8_t> sides_;
  std::vector<std::size_t> offsets_{0};
  std::vector<Vertex> adjacency_;
  std::size_t max_degree_ = 0;
};

inline void check_members(const Graph& g, const VertexSet& s) {
  if (!s.empty() && s.members().back() >= g.n()) {
    throw InvalidArgument("vertex " + std::to_string(s.members().back()) +
                          " out of range for graph on " + std::to_string(g.n()) +
                          " vertices");
  }
}

// ---------------------------------------------------------------------------
// Edge-list text format: "n m", then m lines "u v" or "u v w". Lines whose
// first non-blank character is '#' are comments.

inline Graph parse_graph(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  auto next_line = [&](std::string& out) {
    while (std::getline(in, line)) {
      ++line_no;
      auto pos = line.find_first_not_of(" \t\r");
      if (pos == std::string::npos || line[pos] == '#') continue;
      out = line;
      return true;
    }
    return false;
  };

  std::string text;
  if (!next_line(text)) throw ParseError("missing header line \"n m\"", line_no);
  long long n = -1, m = -1;
  {
    std::istringstream hs(text);
    std::string extra;
    if (!(hs >> n >> m) || n < 0 || m < 0 || (hs >> extra)) {
      throw ParseError("malformed header, expected \"n m\"", line_no);
    }
  }

  std::vector<Edge> edges;
  std::vector<double> weights;
  edges.reserve(static_cast<std::size_t>(m));
  std::optional<bool> weighted;
  for (long long i = 0; i < m; ++i) {
    if (!next_line(text)) throw ParseError("expected " + std::to_string(m) + " edge lines", line_no);
    std::istringstream ls(text);
    long long u = -1, v = -1;
    if (!(ls >> u >> v)) throw ParseError("malformed edge line", line_no);
    double w = 0.0;
    const bool has_w = static_cast<bool>(ls >> w);
    if (!has_w && !ls.eof()) throw ParseError("malformed edge weight", line_no);
    std::string extra;
    if (has_w && (ls >> extra)) throw ParseError("trailing tokens on edge line", line_no);
    if (weighted && *weighted != has_w) throw ParseError("mixed weighted and unweighted edges", line_no);
    weighted = has_w;
    if (u < 0 || v < 0 || u >= n || v >= n) throw ParseError("edge endpoint out of range", line_no);
    if (u == v) throw ParseError("self-loop at vertex " + std::to_string(u), line_no);
    if (has_w && !(w > 0.0)) throw ParseError("non-positive edge weight", line_no);
    edges.push_back({static_cast<Vertex>(u), static_cast<Vertex>(v)});
    if (has_w) weights.push_back(w);
  }
  if (next_line(text)) throw ParseError("more edge lines than declared", line_no);
  return Graph(static_cast<std::size_t>(n), std::move(edges), std::move(weights));
}

inline Graph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open graph file: " + path);
  return parse_graph(in);
}

inline void write_graph(std::ostream& out, const Graph& g) {
  out << g.n() << ' ' << g.m() << '\n';
  const auto w = g.weights();
  for (std::size_t i = 0; i < g.m(); ++i) {
    out << g.edges()[i].u << ' ' << g.edges()[i].v;
    if (g.is_weighted()) out << ' ' << std::setprecision(17) << w[i];
    out << '\n';
  }
}

inline void save_graph(const std::string& path, const Graph& g) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write graph file: " + path);
  write_graph(out, g);
}

// ---------------------------------------------------------------------------

struct InducedSubgraph {
  Graph graph;
  // to_host[i] is the host id of subgraph vertex i.
  std::vector<Vertex> to_host;
};

inline InducedSubgraph induced_subgraph(const Graph& g, const VertexSet& s) {
  check_members(g, s);
  constexpr Vertex kAbsent = std::numeric_limits<Vertex>::max();
  std::vector<Vertex> local(g.n(), kAbsent);
  for (std::size_t i = 0; i < s.size(); ++i) local[s[i]] = static_cast<Vertex>(i);
  std::vector<Edge> edges;
  std::vector<double> weights;
  const auto all = g.edges();
  for (std::size_t i = 0; i < all.size(); ++i) {
    const auto [u, v] = all[i];
    if (local[u] != kAbsent && local[v] != kAbsent) {
      edges.push_back({local[u], local[v]});
      if (g.is_weighted()) weights.push_back(g.weights()[i]);
    }
  }
  std::vector<std::uint8_t> sides;
  if (g.has_bipartition()) {
    for (Vertex v : s) sides.push_back(g.side(v));
  }
  return {Graph(s.size(), std::move(edges), std::move(weights), std::move(sides)),
          s.members()};
}

// Γ(S): every vertex adjacent to some member of S. Members of S are included
// when they have a neighbor in S.
inline VertexSet neighborhood(const Graph& g, const VertexSet& s) {
  check_members(g, s);
  std::vector<std::uint8_t> mark(g.n(), 0);
  std::vector<Vertex> out;
  for (Vertex v : s) {
    for (Vertex u : g.neighbors(v)) {
      if (!mark[u]) {
        mark[u] = 1;
        out.push_back(u);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return VertexSet::from_sorted(std::move(out));
}

inline VertexSet neighborhood(const Graph& g, Vertex v) {
  auto nb = g.neighbors(v);
  return VertexSet::from_sorted({nb.begin(), nb.end()});
}

// Number of edges with both endpoints in s.
inline std::size_t induced_edge_count(const Graph& g, const VertexSet& s) {
  std::vector<std::uint8_t> in(g.n(), 0);
  for (Vertex v : s) in[v] = 1;
  std::size_t twice = 0;
  for (Vertex v : s) {
    for (Vertex u : g.neighbors(v)) twice += in[u];
  }
  return twice / 2;
}

// 2|E(S)| / |S|, zero for the empty set.
inline double average_degree(const Graph& g, const VertexSet& s) {
  if (s.empty()) return 0.0;
  return 2.0 * static_cast<double>(induced_edge_count(g, s)) /
         static_cast<double>(s.size());
}

struct DensityReport {
  std::size_t vertex_count = 0;
  std::size_t edge_count = 0;
  double average_degree = 0.0;
  std::size_t min_degree = 0;
  // log(average_degree) / log(vertex_count); 0 when the average degree is
  // at most 1 or there is a single vertex.
  double log_density = 0.0;
};

inline double log_density(double average_degree, std::size_t vertex_count) {
  if (vertex_count <= 1 || average_degree <= 1.0) return 0.0;
  return std::log(average_degree) / std::log(static_cast<double>(vertex_count));
}

inline DensityReport density_report(const Graph& g, const VertexSet& s) {
  if (s.empty()) throw InvalidArgument("density_report: empty vertex set");
  check_members(g, s);
  std::vector<std::uint8_t> in(g.n(), 0);
  for (Vertex v : s) in[v] = 1;
  DensityReport r;
  r.vertex_count = s.size();
  r.min_degree = std::numeric_limits<std::size_t>::max();
  std::size_t twice = 0;
  for (Vertex v : s) {
    std::size_t d = 0;
    for (Vertex u : g.neighbors(v)) d += in[u];
    twice += d;
    r.min_degree = std::min(r.min_degree, d);
  }
  r.edge_count = twice / 2;
  r.average_degree = static_cast<double>(twice) / static_cast<double>(s.size());
  r.log_density = log_density(r.average_degree, r.vertex_count);
  return r;
}

// Largest subset of s whose induced minimum degree is at least threshold:
// repeatedly delete vertices whose remaining degree is below it.
inline VertexSet peel_to_min_degree(const Graph& g, const VertexSet& s, double threshold) {
  if (threshold < 0) throw InvalidArgument("peel_to_min_degree: negative threshold");
  check_members(g, s);
  std::vector<std::uint8_t> alive(g.n(), 0);
  for (Vertex v : s) alive[v] = 1;
  std::vector<std::size_t> deg(g.n(), 0);
  std::vector<Vertex> queue;
  for (Vertex v : s)
    for (Vertex u : g.neighbors(v)) deg[v] += alive[u];
  for (Vertex v : s) {
    if (static_cast<double>(deg[v]) < threshold) {
      queue.push_back(v);
      alive[v] = 2;  // queued
    }
  }
  while (!queue.empty()) {
    Vertex v = queue.back();
    queue.pop_back();
    alive[v] = 0;
    for (Vertex u : g.neighbors(v)) {
      if (alive[u] == 1 && static_cast<double>(--deg[u]) < threshold) {
        alive[u] = 2;
        queue.push_back(u);
      } else if (alive[u] == 2) {
        --deg[u];
      }
    }
  }
  std::vector<Vertex> out;
  for (Vertex v : s) {
    if (alive[v] == 1) out.push_back(v);
  }
  return VertexSet::from_sorted(std::move(out));
}

}  // namespace dks
