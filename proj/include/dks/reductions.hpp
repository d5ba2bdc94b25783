#pragma once

// Preprocessing and postprocessing that wrap every solver: degree capping,
// growing a solution to exactly k vertices, the bipartite double cover,
// kD <= n pruning, weight bucketing, and the preprocessing used by the
// cluster-based solver.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "dks/error.hpp"
#include "dks/generators.hpp"
#include "dks/graph.hpp"
#include "dks/random.hpp"

namespace dks {

struct GreedyResult {
  VertexSet u;        // ceil(k/2) highest-degree vertices
  VertexSet u_prime;  // floor(k/2) vertices of V \ u with most neighbors in u
  VertexSet h_prime;  // u ∪ u_prime, or the matching fallback
  Graph g_prime;      // induced on V \ u, relabeled
  std::vector<Vertex> g_prime_to_host;
  double cap_degree = 0.0;  // min degree over u; bounds max degree of g_prime
  double gamma = 1.0;       // max{cap_degree * k / n, 1}
  bool matching_fallback = false;
};

// Lower-bound constant of the degree-cap guarantee: h_prime spans at least
// ceil(k/2) floor(k/2) cap / (2n) edges, so its average degree on at most k
// vertices is at least kGreedyConstant * cap * k / n (tight at k = 3).
inline constexpr double kGreedyConstant = 2.0 / 9.0;

// Members of pool ordered by key descending, ties by smaller id; first
// `count` kept.
inline VertexSet top_by(const VertexSet& pool, std::size_t count,
                        const std::function<std::size_t(Vertex)>& key) {
  std::vector<Vertex> order = pool.members();
  count = std::min(count, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(count),
                    order.end(), [&](Vertex a, Vertex b) {
                      const auto ka = key(a), kb = key(b);
                      return ka != kb ? ka > kb : a < b;
                    });
  order.resize(count);
  return VertexSet(std::move(order));
}

inline VertexSet top_by(std::size_t n, std::size_t count,
                        const std::function<std::size_t(Vertex)>& key) {
  return top_by(VertexSet::range(n), count, key);
}

// Maximal set of disjoint edges (scanned in edge order), as a vertex set.
inline VertexSet greedy_matching_vertices(const Graph& g, std::size_t max_edges) {
  std::vector<std::uint8_t> used(g.n(), 0);
  std::vector<Vertex> out;
  for (const auto& e : g.edges()) {
    if (out.size() / 2 >= max_edges) break;
    if (used[e.u] || used[e.v]) continue;
    used[e.u] = used[e.v] = 1;
    out.push_back(e.u);
    out.push_back(e.v);
  }
  return VertexSet(std::move(out));
}

// Adds the smallest unused ids until s has `target` members.
inline VertexSet pad_to(const VertexSet& s, std::size_t target, std::size_t n) {
  std::vector<Vertex> out = s.members();
  for (Vertex v = 0; v < n && out.size() < target; ++v) {
    if (!s.contains(v)) out.push_back(v);
  }
  return VertexSet(std::move(out));
}

inline GreedyResult greedy_core(const Graph& g, std::size_t k) {
  const std::size_t n = g.n();
  if (k < 2 || k > n) {
    throw InvalidArgument("greedy_core: need 2 <= k <= n (k=" + std::to_string(k) +
                          ", n=" + std::to_string(n) + ")");
  }
  const std::size_t half = (k + 1) / 2;
  GreedyResult r;
  r.u = top_by(n, half, [&](Vertex v) { return g.degree(v); });
  r.cap_degree = static_cast<double>(g.n());
  for (Vertex v : r.u) r.cap_degree = std::min(r.cap_degree, static_cast<double>(g.degree(v)));

  std::vector<std::size_t> into_u(n, 0);
  for (Vertex v : r.u)
    for (Vertex w : g.neighbors(v)) ++into_u[w];
  auto rest = set_difference(VertexSet::range(n), r.u);
  r.u_prime = top_by(rest, k / 2, [&](Vertex v) { return into_u[v]; });

  if (g.m() < half) {
    r.matching_fallback = true;
    r.h_prime = pad_to(greedy_matching_vertices(g, half), k, n);
  } else {
    r.h_prime = set_union(r.u, r.u_prime);
  }

  auto sub = induced_subgraph(g, rest);
  r.g_prime = std::move(sub.graph);
  r.g_prime_to_host = std::move(sub.to_host);
  r.gamma = std::max(r.cap_degree * static_cast<double>(k) / static_cast<double>(n), 1.0);
  return r;
}

// Removes lowest-degree vertices (ties: smaller id first) from s, one at a
// time with degrees recomputed inside the shrinking set, until |s| = target.
inline VertexSet prune_lowest_degree(const Graph& g, const VertexSet& s, std::size_t target) {
  if (s.size() <= target) return s;
  std::vector<std::uint8_t> alive(g.n(), 0);
  for (Vertex v : s) alive[v] = 1;
  std::vector<std::size_t> deg(g.n(), 0);
  for (Vertex v : s)
    for (Vertex u : g.neighbors(v)) deg[v] += alive[u];
  std::size_t size = s.size();
  while (size > target) {
    Vertex worst = 0;
    bool found = false;
    for (Vertex v : s) {
      if (!alive[v]) continue;
      if (!found || deg[v] < deg[worst]) {
        worst = v;
        found = true;
      }
    }
    alive[worst] = 0;
    for (Vertex u : g.neighbors(worst)) {
      if (alive[u]) --deg[u];
    }
    --size;
  }
  std::vector<Vertex> out;
  for (Vertex v : s)
    if (alive[v]) out.push_back(v);
  return VertexSet::from_sorted(std::move(out));
}

// Graph with the edges induced on s deleted.
inline Graph remove_induced_edges(const Graph& g, const VertexSet& s) {
  std::vector<std::uint8_t> in(g.n(), 0);
  for (Vertex v : s) in[v] = 1;
  std::vector<Edge> kept;
  kept.reserve(g.m());
  for (const auto& e : g.edges()) {
    if (!(in[e.u] && in[e.v])) kept.push_back(e);
  }
  return Graph(g.n(), std::move(kept));
}

using InnerSolver = std::function<VertexSet(const Graph&)>;

// Grows a solution to exactly k vertices: call `inner`, take the union of
// what it finds, delete those edges, repeat. Overshoot is pruned greedily;
// if the graph runs out of edges first the union is padded with the
// smallest untouched ids.
inline VertexSet union_until_k(const Graph& g, std::size_t k, const InnerSolver& inner) {
  if (k > g.n()) throw InvalidArgument("union_until_k: k exceeds vertex count");
  VertexSet acc;
  Graph current(g.n(), std::vector<Edge>(g.edges().begin(), g.edges().end()));
  while (acc.size() < k) {
    if (current.m() == 0) {
      acc = pad_to(acc, k, g.n());
      break;
    }
    VertexSet found = inner(current);
    check_members(current, found);
    if (found.empty() || induced_edge_count(current, found) == 0) {
      throw StallError("union_until_k: inner solver returned an edgeless subgraph");
    }
    acc = set_union(acc, found);
    current = remove_induced_edges(current, found);
  }
  return prune_lowest_degree(g, acc, k);
}

// Two copies of V with u -- v' and v -- u' for every edge uv; copy v' has
// id v + n. Side 0 holds the originals.
inline Graph bipartite_double_cover(const Graph& g) {
  const auto n = static_cast<Vertex>(g.n());
  std::vector<Edge> edges;
  edges.reserve(2 * g.m());
  for (const auto& e : g.edges()) {
    edges.push_back({e.u, e.v + n});
    edges.push_back({e.v, e.u + n});
  }
  std::vector<std::uint8_t> sides(2 * g.n(), 0);
  std::fill(sides.begin() + static_cast<std::ptrdiff_t>(g.n()), sides.end(), 1);
  return Graph(2 * g.n(), std::move(edges), {}, std::move(sides));
}

inline VertexSet collapse_double_cover(const VertexSet& cover_set, std::size_t n) {
  std::vector<Vertex> out;
  out.reserve(cover_set.size());
  for (Vertex v : cover_set) {
    if (v >= 2 * n) throw InvalidArgument("collapse_double_cover: vertex outside cover");
    out.push_back(static_cast<Vertex>(v % n));
  }
  return VertexSet(std::move(out));
}

struct PruneResult {
  Graph graph;
  double retention = 1.0;  // per-edge keep probability; 1 when no pruning happened
};

// Keeps every edge independently with probability n / (k D) when k D > n.
inline PruneResult prune_to_kD_le_n(const Graph& g, std::size_t k, std::uint64_t seed) {
  const double n = static_cast<double>(g.n());
  const double kd = static_cast<double>(k) * static_cast<double>(g.max_degree());
  if (kd <= n) return {g, 1.0};
  const double p = n / kd;
  Rng rng(seed);
  std::vector<Edge> kept;
  std::vector<double> weights;
  for (std::size_t i = 0; i < g.m(); ++i) {
    if (bernoulli(rng, p)) {
      kept.push_back(g.edges()[i]);
      if (g.is_weighted()) weights.push_back(g.weights()[i]);
    }
  }
  return {Graph(g.n(), std::move(kept), std::move(weights)), p};
}

// Bucket i holds edges with weight in (wmax / 2^(i+1), wmax / 2^i]. Edges
// lighter than wmax / n^2 are dropped. Returns buckets 0..last non-empty,
// each as an unweighted graph on the same vertex set.
inline std::vector<Graph> weight_buckets(const Graph& g) {
  if (!g.is_weighted()) throw InvalidArgument("weight_buckets: graph is unweighted");
  std::vector<Graph> out;
  if (g.m() == 0) return out;
  const auto w = g.weights();
  const double wmax = *std::max_element(w.begin(), w.end());
  const double floor_w = wmax / (static_cast<double>(g.n()) * static_cast<double>(g.n()));
  std::vector<std::vector<Edge>> buckets;
  for (std::size_t i = 0; i < g.m(); ++i) {
    if (!(w[i] > 0.0)) throw InvalidArgument("weight_buckets: non-positive weight");
    if (w[i] < floor_w) continue;
    // Smallest i with wmax / 2^(i+1) < w, found by halving so the boundary
    // cases (w exactly wmax / 2^i) land in bucket i.
    std::size_t idx = 0;
    double upper = wmax;
    while (w[i] <= upper / 2.0) {
      upper /= 2.0;
      ++idx;
    }
    if (buckets.size() <= idx) buckets.resize(idx + 1);
    buckets[idx].push_back(g.edges()[i]);
  }
  out.reserve(buckets.size());
  for (auto& b : buckets) out.emplace_back(g.n(), std::move(b));
  return out;
}

struct ExpPreprocessResult {
  Graph graph;
  double beta = 0.0;             // log_n k
  double step1_retention = 1.0;  // 1 when step 1 did not prune
  double d_prime = 0.0;          // ceil(k/2)-th largest degree after step 1
  enum class Step2 { None, AddedRandom, Pruned } step2 = Step2::None;
  std::size_t added_edges = 0;   // new pairs contributed by G(n, 1/k)
  double step2_retention = 1.0;
  std::vector<std::string> warnings;
};

// Normalizes an instance for the cluster-based solver: thin dense inputs to
// d <= k^(1-beta), then push the ceil(k/2)-th largest degree toward n/k.
inline ExpPreprocessResult exp_preprocess(const Graph& g, std::size_t k, double d, double eps,
                                          std::uint64_t seed) {
  if (!(eps > 0.0 && eps < 0.5)) throw InvalidArgument("exp_preprocess: need 0 < eps < 1/2");
  const std::size_t n = g.n();
  if (n < 2 || k < 2 || k > n) throw InvalidArgument("exp_preprocess: need 2 <= k <= n");
  ExpPreprocessResult r;
  r.beta = std::log(static_cast<double>(k)) / std::log(static_cast<double>(n));
  const double target_d = std::pow(static_cast<double>(k), 1.0 - r.beta);

  Graph current = g;
  if (d > target_d) {
    r.step1_retention = target_d / d;
    Rng rng(seed);
    std::vector<Edge> kept;
    for (const auto& e : g.edges())
      if (bernoulli(rng, r.step1_retention)) kept.push_back(e);
    current = Graph(n, std::move(kept));
  }

  std::vector<std::size_t> degrees(n);
  for (Vertex v = 0; v < n; ++v) degrees[v] = current.degree(v);
  const std::size_t half = (k + 1) / 2;
  std::nth_element(degrees.begin(), degrees.begin() + static_cast<std::ptrdiff_t>(half - 1),
                   degrees.end(), std::greater<>());
  r.d_prime = static_cast<double>(degrees[half - 1]);

  const double product = r.d_prime * static_cast<double>(k);
  if (product < static_cast<double>(n)) {
    r.step2 = ExpPreprocessResult::Step2::AddedRandom;
    Rng rng(derive_seed(seed, 1));
    auto extra = gnp_edges(n, 1.0 / static_cast<double>(k), rng);
    std::vector<Edge> all(current.edges().begin(), current.edges().end());
    const std::size_t before = all.size();
    all.insert(all.end(), extra.begin(), extra.end());
    current = Graph(n, std::move(all));
    r.added_edges = current.m() - before;
  } else if (product > static_cast<double>(n)) {
    r.step2 = ExpPreprocessResult::Step2::Pruned;
    auto pruned = prune_to_kD_le_n(current, k, derive_seed(seed, 2));
    r.step2_retention = pruned.retention;
    current = std::move(pruned.graph);
  }

  // Ranges the analysis assumes without loss of generality; reported only.
  const double d_floor = std::pow(static_cast<double>(k), (1.0 - r.beta) * (1.0 - eps));
  if (d > 0 && std::min(d, target_d) < d_floor) {
    r.warnings.push_back("planted degree below k^((1-beta)(1-eps)); guarantee does not apply");
  }
  r.graph = std::move(current);
  return r;
}

}  // namespace dks
