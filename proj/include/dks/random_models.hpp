#pragma once

// Planted random-graph models and the statistics that tell them apart from
// G(n, p).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dks/caterpillar.hpp"
#include "dks/error.hpp"
#include "dks/generators.hpp"
#include "dks/graph.hpp"
#include "dks/random.hpp"
#include "dks/spectral.hpp"

namespace dks {

enum class Model : std::uint8_t { Null, RandomPlanted, DenseInRandom, DenseVsRandom };

inline const char* to_string(Model m) {
  switch (m) {
    case Model::Null: return "null";
    case Model::RandomPlanted: return "random-planted";
    case Model::DenseInRandom: return "dense-in-random";
    case Model::DenseVsRandom: return "dense-vs-random";
  }
  return "?";
}

struct ModelParams {
  std::size_t n = 0;
  double alpha = 0.0;
  std::size_t k = 0;
  double beta = 0.0;
  std::uint64_t seed = 0;
};

struct PlantedInstance {
  Graph graph;
  std::optional<VertexSet> planted;
  Model model = Model::Null;
  ModelParams params;
  std::optional<double> ground_truth_density;
};

inline double edge_probability(std::size_t n, double alpha) {
  return n < 2 ? 0.0 : std::pow(static_cast<double>(n), alpha - 1.0);
}

inline PlantedInstance gen_null(std::size_t n, double alpha, std::uint64_t seed) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("gen_null: alpha outside (0, 1)");
  PlantedInstance inst;
  inst.graph = gen_gnp(n, edge_probability(n, alpha), seed);
  inst.model = Model::Null;
  inst.params = {n, alpha, 0, 0.0, seed};
  return inst;
}

namespace detail {

// Replaces the induced edges of `base` on `location` with `inner` mapped by
// location[i].
inline Graph replace_block(const Graph& base, const std::vector<Vertex>& location, const std::vector<Edge>& inner) {
  std::vector<std::uint8_t> in(base.n(), 0);
  for (Vertex v : location) in[v] = 1;
  std::vector<Edge> edges;
  edges.reserve(base.m() + inner.size());
  for (const auto& e : base.edges())
    if (!(in[e.u] && in[e.v])) edges.push_back(e);
  for (const auto& e : inner) edges.push_back({location[e.u], location[e.v]});
  return Graph(base.n(), std::move(edges));
}

}  // namespace detail

// Base G(n, n^(alpha-1)); the induced subgraph on a random k-set S is
// replaced by G(k, k^(beta-1)).
inline PlantedInstance plant(std::size_t n, double alpha, std::size_t k, double beta, std::uint64_t seed) {
  if (k > n) throw InvalidArgument("plant: k exceeds n");
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("plant: alpha outside (0, 1)");
  if (!(beta > 0.0 && beta <= 1.0)) throw InvalidArgument("plant: beta outside (0, 1]");
  Rng rng(seed);
  const Graph base(n, gnp_edges(n, edge_probability(n, alpha), rng));
  const auto location = sample_subset(static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(k), rng);
  const auto inner = gnp_edges(k, k < 2 ? 0.0 : std::pow(static_cast<double>(k), beta - 1.0), rng);
  PlantedInstance inst;
  inst.graph = detail::replace_block(base, location, inner);
  inst.planted = VertexSet::from_sorted(location);
  inst.model = Model::RandomPlanted;
  inst.params = {n, alpha, k, beta, seed};
  if (k > 0) inst.ground_truth_density = average_degree(inst.graph, *inst.planted);
  return inst;
}

// Replaces the induced subgraph of g_base on `location` by h. Vertex i of h
// goes to the i-th member of location after a seeded shuffle.
inline PlantedInstance plant_arbitrary(const Graph& g_base, const Graph& h, const VertexSet& location,
                                       std::uint64_t seed) {
  check_members(g_base, location);
  if (location.size() != h.n()) {
    throw InvalidArgument("plant_arbitrary: location has " + std::to_string(location.size()) +
                          " vertices but h has " + std::to_string(h.n()));
  }
  std::vector<Vertex> order = location.members();
  Rng rng(seed);
  shuffle(std::span<Vertex>(order), rng);
  PlantedInstance inst;
  inst.graph = detail::replace_block(g_base, order, std::vector<Edge>(h.edges().begin(), h.edges().end()));
  inst.planted = location;
  inst.model = Model::DenseInRandom;
  const double nd = static_cast<double>(std::max<std::size_t>(g_base.n(), 2));
  const double p = g_base.n() < 2 ? 0.0 : 2.0 * static_cast<double>(g_base.m()) / (nd * (nd - 1));
  const double kd = static_cast<double>(std::max<std::size_t>(h.n(), 2));
  const double dh = h.n() == 0 ? 0.0 : 2.0 * static_cast<double>(h.m()) / static_cast<double>(h.n());
  inst.params = {g_base.n(), p > 0 ? 1.0 + std::log(p) / std::log(nd) : 0.0, h.n(),
                 dh > 0 ? std::log(dh) / std::log(kd) : 0.0, seed};
  if (!location.empty()) inst.ground_truth_density = average_degree(inst.graph, location);
  return inst;
}

// A k-vertex graph with every degree equal to 2*ceil(d/2): a circulant with
// offsets 1..ceil(d/2) laid on a seeded random cyclic order.
inline Graph gen_min_degree(std::size_t k, double d, std::uint64_t seed) {
  const auto half = static_cast<std::size_t>(std::ceil(std::max(d, 0.0) / 2.0));
  if (2 * half >= k && half > 0) throw InvalidArgument("gen_min_degree: degree too large for k vertices");
  std::vector<Vertex> order(k);
  for (std::size_t i = 0; i < k; ++i) order[i] = static_cast<Vertex>(i);
  Rng rng(seed);
  shuffle(std::span<Vertex>(order), rng);
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t off = 1; off <= half; ++off) edges.push_back({order[i], order[(i + off) % k]});
  return Graph(k, std::move(edges));
}

struct DistinguishVerdict {
  std::string statistic;
  double value = 0.0;
  double threshold = 0.0;
  bool planted = false;  // value > threshold
  std::string notes;
};

inline DistinguishVerdict make_verdict(std::string name, double value, double threshold, std::string notes = {}) {
  return {std::move(name), value, threshold, value > threshold, std::move(notes)};
}

// Frozen threshold constants, calibrated on null Monte-Carlo runs.
inline constexpr double kDegreeC = 1.2;
inline constexpr double kIntersectionC = 3.0;
inline constexpr double kSpectralC = 2.5;
inline constexpr double kSdpC = 2.5;
inline constexpr double kCaterpillarC = 4.0;

// Mean degree of the k highest-degree vertices against
// E + c sqrt(log n) sqrt(E).
inline DistinguishVerdict degree_distinguisher(const Graph& g, std::size_t k, double expected_null_degree,
                                               double c = kDegreeC) {
  std::vector<std::size_t> deg(g.n());
  for (Vertex v = 0; v < g.n(); ++v) deg[v] = g.degree(v);
  const std::size_t take = std::min(k, deg.size());
  std::partial_sort(deg.begin(), deg.begin() + static_cast<std::ptrdiff_t>(take), deg.end(), std::greater<>());
  double sum = 0.0;
  for (std::size_t i = 0; i < take; ++i) sum += static_cast<double>(deg[i]);
  const double value = take == 0 ? 0.0 : sum / static_cast<double>(take);
  const double logn = std::log(static_cast<double>(std::max<std::size_t>(g.n(), 2)));
  const double threshold = expected_null_degree + c * std::sqrt(logn) * std::sqrt(std::max(expected_null_degree, 0.0));
  return make_verdict("top-k-degree", value, threshold);
}

// Largest common neighborhood over all pairs (or `pair_budget` seeded
// samples) against n p^2 + c sqrt(log n) sd, with p the realized edge
// density.
inline DistinguishVerdict intersection_distinguisher(const Graph& g, std::uint64_t pair_budget, std::uint64_t seed,
                                                     double c = kIntersectionC) {
  const std::size_t n = g.n();
  std::size_t best = 0;
  const std::uint64_t pairs = n < 2 ? 0 : static_cast<std::uint64_t>(n) * (n - 1) / 2;
  auto common = [&](Vertex u, Vertex v) {
    const auto a = g.neighbors(u), b = g.neighbors(v);
    std::size_t i = 0, j = 0, c2 = 0;
    while (i < a.size() && j < b.size()) {
      if (a[i] < b[j]) ++i;
      else if (a[i] > b[j]) ++j;
      else {
        ++c2;
        ++i;
        ++j;
      }
    }
    return c2;
  };
  std::string notes = "exhaustive";
  if (pairs <= pair_budget) {
    for (Vertex u = 0; u < n; ++u)
      for (Vertex v = u + 1; v < n; ++v) best = std::max(best, common(u, v));
  } else {
    notes = "sampled " + std::to_string(pair_budget) + " pairs";
    Rng rng(seed);
    for (std::uint64_t i = 0; i < pair_budget; ++i) {
      const auto u = static_cast<Vertex>(uniform_below(rng, n));
      auto v = static_cast<Vertex>(uniform_below(rng, n - 1));
      if (v >= u) ++v;
      best = std::max(best, common(u, v));
    }
  }
  const double nd = static_cast<double>(std::max<std::size_t>(n, 2));
  const double p = n < 2 ? 0.0 : 2.0 * static_cast<double>(g.m()) / (nd * (nd - 1));
  const double mean = (nd - 2) * p * p;
  const double sd = std::sqrt((nd - 2) * p * p * (1 - p * p));
  return make_verdict("max-common-neighbors", static_cast<double>(best), mean + c * std::sqrt(std::log(nd)) * sd,
                      notes);
}

// Deflated lambda2 against c n^(rho/2).
inline DistinguishVerdict spectral_distinguisher(const Graph& g, double rho, std::uint64_t seed,
                                                 double c = kSpectralC) {
  const double value = g.n() == 0 ? 0.0 : lambda2_estimate(g, seed).value;
  const double threshold = c * std::pow(static_cast<double>(std::max<std::size_t>(g.n(), 1)), rho / 2.0);
  return make_verdict("lambda2", value, threshold);
}

// SDP dual value k^2 D/n + k lambda2 against k (c sqrt(D) + k D/n).
inline DistinguishVerdict sdp_distinguisher(const Graph& g, std::size_t k, double c = kSdpC) {
  const auto cert = sdp_dual_certificate(g, k);
  const double kd = static_cast<double>(k);
  const double nd = static_cast<double>(std::max<std::size_t>(g.n(), 1));
  const double threshold = kd * (c * std::sqrt(cert.average_degree) + kd * cert.average_degree / nd);
  return make_verdict("sdp-dual-value", cert.dual_value, threshold);
}

// Largest caterpillar count over leaf tuples of distinct vertices against
// c (log n)^(s-r).
inline DistinguishVerdict caterpillar_distinguisher(const Graph& g, int r, int s, std::uint64_t budget,
                                                    std::uint64_t seed, double c = kCaterpillarC) {
  const auto sched = build_schedule(r, s);
  const auto w = max_witness_count(g, sched, budget, seed, true);
  const double logn = std::log(static_cast<double>(std::max<std::size_t>(g.n(), 2)));
  return make_verdict("max-caterpillar-count", static_cast<double>(w.count), c * std::pow(logn, s - r),
                      w.sampled ? "sampled" : "exhaustive");
}

}  // namespace dks
