#pragma once

// (r,s)-caterpillars: the hair/backbone step schedule, homomorphism counts
// with a fixed leaf sequence, and the candidate sets S(t) for the rightmost
// backbone vertex of each prefix.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "dks/error.hpp"
#include "dks/graph.hpp"
#include "dks/random.hpp"

namespace dks {

enum class Step : std::uint8_t { Hair, Backbone };

inline const char* to_string(Step s) { return s == Step::Hair ? "hair" : "backbone"; }

struct CaterpillarSchedule {
  int r = 0;
  int s = 0;
  std::vector<Step> steps;  // steps[t - 1] is step t

  Step kind(int t) const { return steps.at(static_cast<std::size_t>(t - 1)); }
  int leaf_count() const { return r + 1; }
  int internal_count() const { return s - r; }
  int hair_count() const {
    return static_cast<int>(std::count(steps.begin(), steps.end(), Step::Hair));
  }
  int backbone_count() const { return s - hair_count(); }
  // L_t = floor(t r / s); the number of hair steps in 1..t is L_t + 1.
  int leaves_before(int t) const { return t * r / s; }
  // fr(t r / s) as the exact fraction (t r mod s) / s.
  std::pair<int, int> fractional_part(int t) const { return {(t * r) % s, s}; }
  double fractional(int t) const {
    return static_cast<double>((t * r) % s) / static_cast<double>(s);
  }
};

// Step t is a hair iff [(t-1) r / s, t r / s] contains an integer, i.e.
// floor(t r / s) >= ceil((t-1) r / s). Integer arithmetic throughout.
inline CaterpillarSchedule build_schedule(int r, int s) {
  if (!(0 < r && r < s)) throw InvalidArgument("build_schedule: need 0 < r < s");
  if (std::gcd(r, s) != 1) throw InvalidArgument("build_schedule: r and s must be coprime");
  CaterpillarSchedule sched{r, s, {}};
  sched.steps.reserve(static_cast<std::size_t>(s));
  for (int t = 1; t <= s; ++t) {
    const int lo_ceil = ((t - 1) * r + s - 1) / s;
    const int hi_floor = (t * r) / s;
    sched.steps.push_back(hi_floor >= lo_ceil ? Step::Hair : Step::Backbone);
  }
  return sched;
}

// Coprime r/s with 2 <= s <= s_max closest to alpha; ties prefer r/s >= alpha,
// then the smaller s. Exhaustive over all candidate pairs.
inline std::pair<int, int> choose_rs(double alpha, int s_max) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("choose_rs: need 0 < alpha < 1");
  if (s_max < 2) throw InvalidArgument("choose_rs: need s_max >= 2");
  std::pair<int, int> best{1, 2};
  long double best_gap = -1;
  bool best_above = false;
  for (int s = 2; s <= s_max; ++s) {
    for (int r = 1; r < s; ++r) {
      if (std::gcd(r, s) != 1) continue;
      const long double q = static_cast<long double>(r) / s;
      const long double gap = std::fabs(q - static_cast<long double>(alpha));
      const bool above = q >= static_cast<long double>(alpha);
      const bool take = best_gap < 0 || gap < best_gap || (gap == best_gap && above && !best_above);
      if (take) {
        best = {r, s};
        best_gap = gap;
        best_above = above;
      }
    }
  }
  return best;
}

struct LeafTuple {
  std::vector<Vertex> leaves;

  friend auto operator<=>(const LeafTuple&, const LeafTuple&) = default;
};

inline void check_leaves(const Graph& g, const CaterpillarSchedule& sched, const LeafTuple& t) {
  if (static_cast<int>(t.leaves.size()) != sched.leaf_count()) {
    throw InvalidArgument("leaf tuple length " + std::to_string(t.leaves.size()) +
                          " does not match r + 1 = " + std::to_string(sched.leaf_count()));
  }
  for (Vertex v : t.leaves)
    if (v >= g.n()) throw InvalidArgument("leaf vertex out of range");
}

namespace detail {

// Sparse vector over vertices with a dense value array and a support list.
struct SparseCounts {
  std::vector<std::uint64_t> value;
  std::vector<Vertex> support;
};

// Dynamic program along the backbone. State after each step: for every
// vertex v, the number of homomorphic images of the prefix whose rightmost
// backbone vertex maps to v.
class CaterpillarDp {
 public:
  explicit CaterpillarDp(const Graph& g) : g_(g), mark_(g.n(), 0) {
    cur_.value.assign(g.n(), 0);
    next_.value.assign(g.n(), 0);
  }

  // State before any step: every vertex is a candidate with count 1.
  void reset_all() {
    clear(cur_);
    dense_ = true;
  }

  void hair(Vertex leaf) {
    if (dense_) {
      // Restrict the implicit all-ones vector to Γ(leaf).
      clear(cur_);
      for (Vertex u : g_.neighbors(leaf)) {
        cur_.value[u] = 1;
        cur_.support.push_back(u);
      }
      dense_ = false;
      return;
    }
    for (Vertex u : g_.neighbors(leaf)) mark_[u] = 1;
    std::size_t out = 0;
    for (Vertex v : cur_.support) {
      if (mark_[v]) {
        cur_.support[out++] = v;
      } else {
        cur_.value[v] = 0;
      }
    }
    cur_.support.resize(out);
    for (Vertex u : g_.neighbors(leaf)) mark_[u] = 0;
  }

  void backbone() {
    if (dense_) {
      // Γ applied to the all-ones vector gives the degree vector.
      clear(cur_);
      for (Vertex v = 0; v < g_.n(); ++v) {
        if (g_.degree(v) == 0) continue;
        cur_.value[v] = g_.degree(v);
        cur_.support.push_back(v);
      }
      dense_ = false;
      return;
    }
    clear(next_);
    for (Vertex v : cur_.support) {
      const auto c = cur_.value[v];
      for (Vertex w : g_.neighbors(v)) {
        if (next_.value[w] == 0) next_.support.push_back(w);
        next_.value[w] += c;
      }
    }
    std::swap(cur_, next_);
  }

  std::uint64_t total() const {
    if (dense_) return g_.n();
    std::uint64_t sum = 0;
    for (Vertex v : cur_.support) sum += cur_.value[v];
    return sum;
  }

  bool empty() const { return !dense_ && cur_.support.empty(); }
  const SparseCounts& state() const { return cur_; }
  bool dense() const { return dense_; }

  // Snapshot and restore for depth-first enumeration.
  struct Saved {
    std::vector<std::pair<Vertex, std::uint64_t>> entries;
    bool dense;
  };
  Saved save() const {
    Saved s{{}, dense_};
    s.entries.reserve(cur_.support.size());
    for (Vertex v : cur_.support) s.entries.emplace_back(v, cur_.value[v]);
    return s;
  }
  void restore(const Saved& s) {
    clear(cur_);
    dense_ = s.dense;
    for (auto [v, c] : s.entries) {
      cur_.value[v] = c;
      cur_.support.push_back(v);
    }
  }

 private:
  static void clear(SparseCounts& c) {
    for (Vertex v : c.support) c.value[v] = 0;
    c.support.clear();
  }

  const Graph& g_;
  SparseCounts cur_;
  SparseCounts next_;
  std::vector<std::uint8_t> mark_;
  bool dense_ = true;
};

}  // namespace detail

// Number of homomorphisms of the (r,s)-caterpillar into g whose leaves map
// to the given sequence (internal vertices may coincide with leaves or with
// each other). O(s |E|).
inline std::uint64_t count_caterpillars(const Graph& g, const CaterpillarSchedule& sched,
                                        const LeafTuple& leaves) {
  check_leaves(g, sched, leaves);
  detail::CaterpillarDp dp(g);
  std::size_t next_leaf = 0;
  for (Step step : sched.steps) {
    if (step == Step::Hair) {
      dp.hair(leaves.leaves[next_leaf++]);
    } else {
      dp.backbone();
    }
    if (dp.empty()) return 0;
  }
  return dp.total();
}

// Injective variant: all s + 1 tree vertices distinct. Exponential in s - r;
// intended for small graphs.
inline std::uint64_t count_caterpillars_injective(const Graph& g,
                                                  const CaterpillarSchedule& sched,
                                                  const LeafTuple& leaves) {
  check_leaves(g, sched, leaves);
  std::vector<Vertex> sorted = leaves.leaves;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return 0;

  std::vector<std::uint8_t> used(g.n(), 0);
  for (Vertex v : leaves.leaves) used[v] = 1;
  std::uint64_t total = 0;
  // Backbone vertex b_0 is free; each backbone step introduces b_{i+1}.
  auto dfs = [&](auto&& self, std::size_t step, Vertex current, std::size_t leaf) -> void {
    if (step == sched.steps.size()) {
      ++total;
      return;
    }
    if (sched.steps[step] == Step::Hair) {
      if (g.has_edge(current, leaves.leaves[leaf])) self(self, step + 1, current, leaf + 1);
      return;
    }
    for (Vertex w : g.neighbors(current)) {
      if (used[w]) continue;
      used[w] = 1;
      self(self, step + 1, w, leaf);
      used[w] = 0;
    }
  };
  for (Vertex b0 = 0; b0 < g.n(); ++b0) {
    if (used[b0]) continue;
    used[b0] = 1;
    dfs(dfs, 0, b0, 0);
    used[b0] = 0;
  }
  return total;
}

struct CandidateTrace {
  int r = 0;
  int s = 0;
  std::size_t n = 0;
  std::vector<VertexSet> sets;  // S(0) .. S(s)
  std::vector<Step> kinds;      // kinds[t - 1] for step t
  std::vector<std::pair<int, int>> fractional_exponents;  // fr(t r / s), t = 0..s

  std::size_t size(int t) const { return sets.at(static_cast<std::size_t>(t)).size(); }
  // n^{fr(t r / s)}
  double predicted(int t) const {
    const auto [num, den] = fractional_exponents.at(static_cast<std::size_t>(t));
    return std::pow(static_cast<double>(n), static_cast<double>(num) / den);
  }
};

// S(0) = V; a hair step intersects with the next leaf's neighborhood, a
// backbone step replaces the set by its neighborhood.
inline CandidateTrace candidate_trace(const Graph& g, const CaterpillarSchedule& sched,
                                      const LeafTuple& leaves) {
  check_leaves(g, sched, leaves);
  CandidateTrace tr;
  tr.r = sched.r;
  tr.s = sched.s;
  tr.n = g.n();
  tr.sets.push_back(VertexSet::range(g.n()));
  tr.fractional_exponents.push_back({0, sched.s});
  std::size_t next_leaf = 0;
  for (int t = 1; t <= sched.s; ++t) {
    const Step kind = sched.kind(t);
    const VertexSet& prev = tr.sets.back();
    VertexSet next = kind == Step::Hair
                         ? set_intersection(prev, neighborhood(g, leaves.leaves[next_leaf++]))
                         : neighborhood(g, prev);
    tr.sets.push_back(std::move(next));
    tr.kinds.push_back(kind);
    tr.fractional_exponents.push_back(sched.fractional_part(t));
  }
  return tr;
}

inline bool has_repeat(std::vector<Vertex> v) {
  std::sort(v.begin(), v.end());
  return std::adjacent_find(v.begin(), v.end()) != v.end();
}

struct WitnessResult {
  LeafTuple leaves;
  std::uint64_t count = 0;
  bool sampled = false;
  std::uint64_t tuples_examined = 0;
};

// Leaf tuple maximizing count_caterpillars. Leaves range over vertices of
// degree >= 1. Full lexicographic enumeration when (#candidates)^(r+1) fits
// in the budget, else `budget` uniformly sampled tuples. Ties go to the
// lexicographically smaller tuple. With distinct_leaves, tuples repeating a
// vertex are skipped (sampling redraws them).
inline WitnessResult max_witness_count(const Graph& g, const CaterpillarSchedule& sched,
                                       std::uint64_t budget, std::uint64_t seed,
                                       bool distinct_leaves = false) {
  WitnessResult best;
  best.leaves.leaves.assign(static_cast<std::size_t>(sched.leaf_count()), 0);
  std::vector<Vertex> cand;
  for (Vertex v = 0; v < g.n(); ++v)
    if (g.degree(v) > 0) cand.push_back(v);
  if (cand.empty()) return best;

  const int depth = sched.leaf_count();
  long double space = 1;
  for (int i = 0; i < depth; ++i) space *= static_cast<long double>(cand.size());

  if (distinct_leaves && cand.size() < static_cast<std::size_t>(depth)) return best;

  if (space <= static_cast<long double>(budget)) {
    // Depth-first over leaves with the DP state shared across prefixes.
    best.leaves.leaves.assign(static_cast<std::size_t>(depth), cand.front());
    best.count = distinct_leaves ? 0 : count_caterpillars(g, sched, best.leaves);
    best.tuples_examined = static_cast<std::uint64_t>(space);
    detail::CaterpillarDp dp(g);
    dp.reset_all();
    std::vector<Vertex> prefix;
    auto dfs = [&](auto&& self, std::size_t step) -> void {
      // Apply backbone steps until the next hair (or the end).
      while (step < sched.steps.size() && sched.steps[step] == Step::Backbone) {
        dp.backbone();
        ++step;
        if (dp.empty()) return;
      }
      if (step == sched.steps.size()) {
        const auto c = dp.total();
        if (c > best.count) {
          best.count = c;
          best.leaves.leaves = prefix;
        }
        return;
      }
      const auto saved = dp.save();
      for (Vertex leaf : cand) {
        if (distinct_leaves && std::find(prefix.begin(), prefix.end(), leaf) != prefix.end()) continue;
        dp.restore(saved);
        dp.hair(leaf);
        if (dp.empty()) continue;
        prefix.push_back(leaf);
        self(self, step + 1);
        prefix.pop_back();
      }
    };
    dfs(dfs, 0);
    return best;
  }

  best.sampled = true;
  best.tuples_examined = budget;
  Rng rng(seed);
  bool have = false;
  LeafTuple t;
  t.leaves.resize(static_cast<std::size_t>(depth));
  for (std::uint64_t i = 0; i < budget; ++i) {
    do {
      for (auto& v : t.leaves) v = cand[uniform_below(rng, cand.size())];
    } while (distinct_leaves && has_repeat(t.leaves));
    const auto c = count_caterpillars(g, sched, t);
    if (!have || c > best.count || (c == best.count && t < best.leaves)) {
      best.count = c;
      best.leaves = t;
      have = true;
    }
  }
  return best;
}

}  // namespace dks
