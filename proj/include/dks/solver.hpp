#pragma once

// The caterpillar-driven solver family: the combinatorial search over leaf
// sequences, the cluster-leaf variant, and the top-level approximation
// pipeline.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dks/caterpillar.hpp"
#include "dks/error.hpp"
#include "dks/exact.hpp"
#include "dks/graph.hpp"
#include "dks/local.hpp"
#include "dks/random.hpp"
#include "dks/reductions.hpp"
#include "dks/result.hpp"

namespace dks {

// One executed step of one branch, reported to an optional observer.
struct StepEvent {
  int t = 0;
  Step kind = Step::Hair;
  const VertexSet* set = nullptr;           // S_t after the step
  const std::vector<Vertex>* leaves = nullptr;  // leaves (or cluster members) chosen so far
  double best_density = 0.0;                // best density found before this step
};
using StepObserver = std::function<void(const StepEvent&)>;

struct CatConfig {
  int r = 1;
  int s = 2;
  std::uint64_t leaf_budget = 1'000'000;  // max leaf sequences enumerated
  std::uint64_t seed = 0;
  bool finalize = true;  // grow/prune the answer to exactly k vertices
  StepObserver observer;
};

namespace detail {

inline std::string join(const std::vector<Vertex>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(v[i]);
  }
  return out;
}

inline std::vector<Vertex> leaf_candidates(const Graph& g) {
  std::vector<Vertex> cand;
  for (Vertex v = 0; v < g.n(); ++v)
    if (g.degree(v) > 0) cand.push_back(v);
  return cand;
}

inline long double power(std::size_t base, int exp) {
  long double p = 1;
  for (int i = 0; i < exp; ++i) p *= static_cast<long double>(base);
  return p;
}

// Γ(J) for a cluster J.
inline VertexSet cluster_neighborhood(const Graph& g, const std::vector<Vertex>& cluster) {
  return neighborhood(g, VertexSet(cluster));
}

// Shared search engine. `cluster` = 1 is the single-leaf algorithm; larger
// clusters intersect with Γ(J) and also run DkS-Local from J.
class CaterpillarSearch {
 public:
  CaterpillarSearch(const Graph& g, std::size_t k, const CaterpillarSchedule& sched,
                    std::size_t cluster, const StepObserver& observer)
      : g_(g), k_(k), sched_(sched), cluster_(cluster), observer_(observer) {
    best_.provenance = "none";
  }

  // Hair steps whose choice can affect the output. With single leaves the
  // last step's leaf is never used (S_s feeds no DkS-Local call).
  int enumerated_hairs() const {
    return cluster_ == 1 ? sched_.hair_count() - 1 : sched_.hair_count();
  }

  void run_full(const std::vector<std::vector<Vertex>>& choices) {
    choices_ = &choices;
    sampled_ = nullptr;
    VertexSet all = VertexSet::range(g_.n());
    descend(1, all);
  }

  void run_sampled(const std::vector<std::vector<Vertex>>& choices, std::uint64_t samples,
                   std::uint64_t seed) {
    Rng rng(seed);
    const int hairs = enumerated_hairs();
    std::vector<std::size_t> path(static_cast<std::size_t>(hairs));
    for (std::uint64_t i = 0; i < samples; ++i) {
      for (auto& p : path) p = static_cast<std::size_t>(uniform_below(rng, choices.size()));
      choices_ = &choices;
      sampled_ = &path;
      VertexSet all = VertexSet::range(g_.n());
      descend(1, all);
    }
  }

  const SolveResult& best() const { return best_; }

 private:
  void consider(SolveResult r, int t, const char* tag) {
    if (r.vertices.empty()) return;
    r.provenance = std::string(tag) + ":t=" + std::to_string(t) + ":leaves=" + join(chosen_);
    if (best_.vertices.empty() || better_than(r, best_)) best_ = std::move(r);
  }

  void notify(int t, Step kind, const VertexSet& set) {
    if (!observer_) return;
    StepEvent ev{t, kind, &set, &chosen_, best_.vertices.empty() ? 0.0 : best_.density};
    observer_(ev);
  }

  // Executes steps t..s starting from S_{t-1} = prev.
  void descend(int t, const VertexSet& prev) {
    if (t > sched_.s) return;
    if (t > 1) consider(dks_local(g_, prev, k_), t, "local");
    const bool last = t == sched_.s;
    const Step kind = sched_.kind(t);
    if (kind == Step::Backbone) {
      VertexSet next = neighborhood(g_, prev);
      notify(t, kind, next);
      if (!next.empty()) descend(t + 1, next);
      return;
    }
    if (last && cluster_ == 1) return;
    const std::size_t depth = hair_depth_++;
    auto run_choice = [&](const std::vector<Vertex>& choice) {
      VertexSet next = set_intersection(prev, cluster_neighborhood(g_, choice));
      chosen_.insert(chosen_.end(), choice.begin(), choice.end());
      notify(t, kind, next);
      if (!next.empty()) {
        if (cluster_ > 1) {
          VertexSet within = set_union(VertexSet(choice), next);
          consider(dks_local(g_, VertexSet(choice), k_, &within), t, "cluster");
        }
        if (!last) descend(t + 1, next);
      }
      chosen_.resize(chosen_.size() - choice.size());
    };
    if (sampled_) {
      run_choice((*choices_)[(*sampled_)[depth]]);
    } else {
      for (const auto& choice : *choices_) run_choice(choice);
    }
    --hair_depth_;
  }

  const Graph& g_;
  std::size_t k_;
  const CaterpillarSchedule& sched_;
  std::size_t cluster_;
  const StepObserver& observer_;
  const std::vector<std::vector<Vertex>>* choices_ = nullptr;
  const std::vector<std::size_t>* sampled_ = nullptr;
  std::vector<Vertex> chosen_;
  std::size_t hair_depth_ = 0;
  SolveResult best_;
};

// All C-subsets of `cand` in lexicographic order.
inline std::vector<std::vector<Vertex>> clusters_of(const std::vector<Vertex>& cand,
                                                    std::size_t size) {
  std::vector<std::vector<Vertex>> out;
  if (size == 0 || size > cand.size()) return out;
  std::vector<std::size_t> idx(size);
  for (std::size_t i = 0; i < size; ++i) idx[i] = i;
  while (true) {
    std::vector<Vertex> c(size);
    for (std::size_t i = 0; i < size; ++i) c[i] = cand[idx[i]];
    out.push_back(std::move(c));
    std::size_t i = size;
    while (i > 0 && idx[i - 1] == cand.size() - size + i - 1) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t j = i; j < size; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

struct SearchOutcome {
  SolveResult best;
  bool sampled = false;
  long double branches = 0;
};

inline SearchOutcome caterpillar_search(const Graph& g, std::size_t k,
                                        const CaterpillarSchedule& sched, std::size_t cluster,
                                        std::uint64_t budget, std::uint64_t seed,
                                        const StepObserver& observer) {
  SearchOutcome out;
  const auto cand = leaf_candidates(g);
  if (cand.size() < cluster) return out;
  std::vector<std::vector<Vertex>> choices;
  if (cluster == 1) {
    for (Vertex v : cand) choices.push_back({v});
  } else {
    if (binomial(cand.size(), cluster) > 50'000'000) {
      throw BudgetExceeded("cluster enumeration C(" + std::to_string(cand.size()) + ", " +
                           std::to_string(cluster) + ") too large");
    }
    choices = clusters_of(cand, cluster);
  }
  CaterpillarSearch search(g, k, sched, cluster, observer);
  out.branches = power(choices.size(), search.enumerated_hairs());
  if (out.branches <= static_cast<long double>(budget)) {
    search.run_full(choices);
  } else {
    out.sampled = true;
    search.run_sampled(choices, budget, seed);
  }
  out.best = search.best();
  return out;
}

}  // namespace detail

// Best DkS-Local output over the caterpillar search, before any resizing.
// The result has at most 2k vertices and is empty when no branch produced an
// edge.
inline SolveResult dks_cat_search(const Graph& g, std::size_t k, const CatConfig& cfg) {
  const auto sched = build_schedule(cfg.r, cfg.s);
  auto outcome = detail::caterpillar_search(g, k, sched, 1, cfg.leaf_budget, cfg.seed, cfg.observer);
  outcome.best.rs = std::pair{cfg.r, cfg.s};
  return outcome.best;
}

// Runs `search` inside union_until_k on g, pruning each round's output to at
// most k vertices first. The first round's answer is supplied precomputed.
inline SolveResult finalize_to_k(const Graph& g, std::size_t k, SolveResult first,
                                 const std::function<SolveResult(const Graph&)>& search) {
  if (k <= 1) {
    SolveResult out = make_result(g, first.vertices.empty() ? VertexSet{0} : VertexSet{first.vertices[0]},
                                  first.provenance);
    out.rs = first.rs;
    return out;
  }
  bool used_first = false;
  std::string provenance = first.provenance;
  auto inner = [&](const Graph& current) -> VertexSet {
    SolveResult r;
    if (!used_first) {
      used_first = true;
      r = first;
    } else {
      r = search(current);
    }
    return prune_lowest_degree(current, r.vertices, k);
  };
  VertexSet vertices = union_until_k(g, k, inner);
  SolveResult out = make_result(g, std::move(vertices), provenance);
  out.rs = first.rs;
  return out;
}

// Combinatorial caterpillar algorithm: every leaf sequence is tried (or a
// seeded sample of them when the space exceeds the budget), DkS-Local runs
// on every S_{t-1} for t > 1, and the best subgraph found is grown or pruned
// to exactly k vertices.
inline SolveResult dks_cat_combinatorial(const Graph& g, std::size_t k, const CatConfig& cfg) {
  if (cfg.leaf_budget == 0) throw InvalidArgument("dks_cat_combinatorial: leaf budget is 0");
  if (g.n() == 0) throw InvalidArgument("dks_cat_combinatorial: empty graph");
  if (k == 0 || k > g.n()) throw InvalidArgument("dks_cat_combinatorial: need 1 <= k <= n");
  SolveResult raw = dks_cat_search(g, k, cfg);
  if (!cfg.finalize) return raw;
  CatConfig quiet = cfg;
  quiet.observer = nullptr;
  return finalize_to_k(g, k, std::move(raw),
                       [&](const Graph& current) { return dks_cat_search(current, k, quiet); });
}

struct ExpConfig {
  double eps = 0.1;
  std::size_t cluster_budget = 3;             // largest cluster size allowed
  std::optional<std::size_t> cluster_size;   // overrides the size formula
  int s_max = 4;
  std::optional<std::pair<int, int>> rs;     // overrides the (r, s) choice
  std::uint64_t branch_budget = 5'000'000;   // max cluster sequences enumerated
  bool allow_sampling = true;
  std::uint64_t seed = 0;
  bool finalize = true;
  StepObserver observer;
};

struct ExpParameters {
  double alpha = 0.0;
  double alpha_prime = 0.0;
  int r = 1;
  int s = 2;
  std::size_t cluster = 1;
};

// alpha = 1 - log_n k, alpha' = alpha + 2 beta eps, r/s near alpha', and the
// cluster size C = n^(2 beta eps / (2 beta eps + alpha)) rounded and capped.
inline ExpParameters exp_parameters(const Graph& g, std::size_t k, const ExpConfig& cfg) {
  const double n = static_cast<double>(std::max<std::size_t>(g.n(), 2));
  const double beta = std::log(static_cast<double>(std::max<std::size_t>(k, 1))) / std::log(n);
  ExpParameters p;
  p.alpha = std::clamp(1.0 - beta, 1e-9, 1.0 - 1e-9);
  p.alpha_prime = std::clamp(p.alpha + 2.0 * beta * cfg.eps, 1e-9, 1.0 - 1e-9);
  if (cfg.rs) {
    p.r = cfg.rs->first;
    p.s = cfg.rs->second;
  } else {
    std::tie(p.r, p.s) = choose_rs(p.alpha_prime, cfg.s_max);
  }
  if (cfg.cluster_size) {
    p.cluster = *cfg.cluster_size;
  } else {
    const double x = 2.0 * beta * cfg.eps;
    p.cluster = static_cast<std::size_t>(std::llround(std::pow(n, x / (x + p.alpha))));
    p.cluster = std::clamp<std::size_t>(p.cluster, 1, std::max<std::size_t>(cfg.cluster_budget, 1));
  }
  if (p.cluster == 0) throw InvalidArgument("dks_exp: cluster size must be positive");
  return p;
}

// Cluster-leaf variant: each hair step intersects with the neighborhood of a
// C-vertex cluster J and additionally runs DkS-Local from J inside J ∪ S_t.
// With C = 1 this is exactly dks_cat_combinatorial.
inline SolveResult dks_exp(const Graph& g, std::size_t k, const ExpConfig& cfg) {
  if (g.n() == 0) throw InvalidArgument("dks_exp: empty graph");
  if (k == 0 || k > g.n()) throw InvalidArgument("dks_exp: need 1 <= k <= n");
  const auto p = exp_parameters(g, k, cfg);
  if (p.cluster > cfg.cluster_budget && !cfg.allow_sampling) {
    throw BudgetExceeded("dks_exp: cluster size " + std::to_string(p.cluster) +
                         " exceeds cluster budget " + std::to_string(cfg.cluster_budget));
  }
  const auto sched = build_schedule(p.r, p.s);
  auto search = [&](const Graph& h, const StepObserver& obs) {
    const auto cand_count = detail::leaf_candidates(h).size();
    const int hairs = p.cluster == 1 ? sched.hair_count() - 1 : sched.hair_count();
    const long double space = detail::power(binomial(cand_count, p.cluster), hairs);
    if (space > static_cast<long double>(cfg.branch_budget) && !cfg.allow_sampling) {
      throw BudgetExceeded("dks_exp: branch count exceeds budget and sampling is disabled");
    }
    auto outcome = detail::caterpillar_search(h, k, sched, p.cluster, cfg.branch_budget, cfg.seed, obs);
    outcome.best.rs = std::pair{p.r, p.s};
    return outcome.best;
  };
  SolveResult raw = search(g, cfg.observer);
  if (!cfg.finalize) return raw;
  return finalize_to_k(g, k, std::move(raw),
                       [&](const Graph& current) { return search(current, nullptr); });
}

struct ApproxConfig {
  int s_max = 4;
  std::optional<std::pair<int, int>> rs;  // overrides choose_rs
  std::uint64_t leaf_budget = 20'000;
  std::uint64_t seed = 0;
};

// Adds, one at a time, the vertex with the most neighbors in s (ties by id)
// until |s| = k.
inline VertexSet grow_to(const Graph& g, const VertexSet& s, std::size_t k) {
  if (s.size() >= k) return s;
  std::vector<std::uint8_t> in(g.n(), 0);
  std::vector<std::size_t> into(g.n(), 0);
  std::vector<Vertex> members = s.members();
  for (Vertex v : s) {
    in[v] = 1;
    for (Vertex u : g.neighbors(v)) ++into[u];
  }
  while (members.size() < k) {
    Vertex pick = 0;
    bool found = false;
    for (Vertex v = 0; v < g.n(); ++v) {
      if (in[v]) continue;
      if (!found || into[v] > into[pick]) {
        pick = v;
        found = true;
      }
    }
    in[pick] = 1;
    members.push_back(pick);
    for (Vertex u : g.neighbors(pick)) ++into[u];
  }
  return VertexSet(std::move(members));
}

// Exactly k vertices: prune the lowest-degree members or grow.
inline VertexSet resize_to(const Graph& g, const VertexSet& s, std::size_t k) {
  return s.size() > k ? prune_lowest_degree(g, s, k) : grow_to(g, s, k);
}

// Edges taken in order while their endpoints fit in k vertices; k/2 edges
// always fit, which gives average degree about 1 whenever the graph has
// that many edges.
inline VertexSet edge_fill(const Graph& g, std::size_t k) {
  std::vector<std::uint8_t> in(g.n(), 0);
  std::vector<Vertex> members;
  for (const auto& e : g.edges()) {
    const std::size_t extra = (in[e.u] ? 0 : 1) + (in[e.v] ? 0 : 1);
    if (members.size() + extra > k) continue;
    for (Vertex v : {e.u, e.v}) {
      if (!in[v]) {
        in[v] = 1;
        members.push_back(v);
      }
    }
    if (members.size() == k) break;
  }
  return VertexSet(std::move(members));
}

// Degree capping, bipartite double cover, the caterpillar search with
// (r, s) matched to the log-density of the capped graph, collapse, and
// resize to k. Returns the best of that and the simple baselines.
inline SolveResult approximate(const Graph& g, std::size_t k, const ApproxConfig& cfg = {}) {
  const std::size_t n = g.n();
  if (k < 1 || k > n) throw InvalidArgument("approximate: need 1 <= k <= n");

  if (g.is_weighted()) {
    auto buckets = weight_buckets(g);
    SolveResult best;
    double best_weight = -1.0;
    std::vector<std::pair<Edge, double>> weighted;
    for (std::size_t i = 0; i < buckets.size(); ++i) {
      if (buckets[i].m() == 0) continue;
      SolveResult r = approximate(buckets[i], k, cfg);
      double w = 0.0;
      for (std::size_t e = 0; e < g.m(); ++e) {
        const auto& edge = g.edges()[e];
        if (r.vertices.contains(edge.u) && r.vertices.contains(edge.v)) w += g.weights()[e];
      }
      if (w > best_weight) {
        best_weight = w;
        best = make_result(g, r.vertices, "bucket=" + std::to_string(i) + ":" + r.provenance);
        best.gamma = r.gamma;
        best.rs = r.rs;
      }
    }
    if (best_weight < 0) best = make_result(g, pad_to({}, k, n), "empty");
    return best;
  }

  if (k == n) return make_result(g, VertexSet::range(n), "whole-graph");
  if (k == 1) return make_result(g, VertexSet{0}, "single-vertex");

  const GreedyResult greedy = greedy_core(g, k);
  std::vector<SolveResult> candidates;
  candidates.push_back(make_result(g, resize_to(g, greedy.h_prime, k), "greedy"));
  candidates.push_back(make_result(g, grow_to(g, edge_fill(g, k), k), "edge-fill"));

  // Run the caterpillar search on the degree-capped remainder when it can
  // still hold k vertices, otherwise on g itself.
  const bool use_capped = greedy.g_prime.n() >= k;
  const Graph& host = use_capped ? greedy.g_prime : g;
  std::pair<int, int> rs{1, 2};
  if (host.m() > 0) {
    const double cap = use_capped ? greedy.cap_degree : static_cast<double>(g.max_degree());
    double alpha = cap > 1.0 ? std::log(cap) / std::log(static_cast<double>(host.n())) : 1e-6;
    alpha = std::clamp(alpha, 1e-6, 1.0 - 1e-6);
    rs = cfg.rs ? *cfg.rs : choose_rs(alpha, cfg.s_max);
    CatConfig cat{rs.first, rs.second, cfg.leaf_budget, cfg.seed, false, nullptr};

    auto search_host = [&](const Graph& h) {
      SolveResult r = dks_cat_search(bipartite_double_cover(h), k, cat);
      VertexSet collapsed = collapse_double_cover(r.vertices, h.n());
      SolveResult out = make_result(h, std::move(collapsed), r.provenance);
      out.rs = r.rs;
      return out;
    };
    SolveResult first = search_host(host);
    if (!first.vertices.empty() && first.density > 0.0) {
      SolveResult sized = finalize_to_k(host, k, std::move(first), search_host);
      std::vector<Vertex> mapped;
      for (Vertex v : sized.vertices) mapped.push_back(use_capped ? greedy.g_prime_to_host[v] : v);
      candidates.push_back(make_result(g, VertexSet(std::move(mapped)), "cat:" + sized.provenance));
    }
  }

  SolveResult best = candidates.front();
  for (auto& c : candidates)
    if (better_than(c, best)) best = c;
  best.gamma = greedy.gamma;
  best.rs = rs;
  return best;
}

}  // namespace dks
