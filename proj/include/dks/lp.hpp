#pragma once

// The flattened homogenized LP hierarchy for DkS: construction, indicator
// solutions, exact certificate checking, and LP-format export.
//
// Variables are addressed by vertex paths. The empty path is the root
// homogenizer h (fixed to 1); a path q·i is y_{qi}. A depth-t instance has
// paths of length 0..t+1. Every path q of length 0..t-1 is a node carrying
// one copy of the base constraint system with y_q in the role of h:
//
//   (1) sum_i y_{qi} <= k y_q
//   (2) sum_{j in N(i)} y_{qij} >= d y_{qi}          for every i
//   (3) y_{qij} = y_{qji}                              for i < j
//   (4) y_{qi} <= y_q,  y_{qij} <= y_{qi},  y_{qij} >= 0
//
// Nesting the nodes is the recursion; a constraint's level is |q|.
//
// Naming: h, y_3, y_3_5, y_3_5_0, ... (vertex ids joined by '_').

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "dks/error.hpp"
#include "dks/graph.hpp"
#include "dks/local.hpp"
#include "dks/rational.hpp"

namespace dks {

enum class Sense : std::uint8_t { LessEq, GreaterEq, Equal };

struct LinearTerm {
  std::uint64_t var = 0;
  Rational coef;
};

// sum(coef * var) <sense> 0
struct Constraint {
  std::uint64_t id = 0;
  int family = 0;
  int level = 0;
  Sense sense = Sense::LessEq;
  std::vector<LinearTerm> terms;
};

inline constexpr std::uint64_t kDefaultLpVariableBudget = std::uint64_t{1} << 23;
inline constexpr int kDefaultLpMaxDepth = 3;

struct LPOptions {
  int max_depth = kDefaultLpMaxDepth;
  std::uint64_t variable_budget = kDefaultLpVariableBudget;
};

class LPInstance {
 public:
  LPInstance(Graph g, std::size_t k, double d, int t, const LPOptions& opts = {})
      : graph_(std::move(g)), k_(k), d_(d), d_exact_(Rational::from_double(d)), t_(t) {
    if (t < 1) throw InvalidArgument("build_lp: depth t must be >= 1");
    if (t > opts.max_depth) {
      throw InvalidArgument("build_lp: depth " + std::to_string(t) + " exceeds the cap " +
                            std::to_string(opts.max_depth));
    }
    if (d < 0) throw InvalidArgument("build_lp: d must be non-negative");
    const long double n = static_cast<long double>(graph_.n());
    long double total = 0, power = 1;
    for (int len = 0; len <= t + 1; ++len) {
      total += power;
      power *= n;
    }
    if (total > static_cast<long double>(opts.variable_budget)) {
      throw BudgetExceeded("build_lp: " + std::to_string(static_cast<double>(total)) +
                           " variables exceed the budget of " + std::to_string(opts.variable_budget));
    }
    std::uint64_t offset = 0, pw = 1;
    for (int len = 0; len <= t + 1; ++len) {
      offset_.push_back(offset);
      offset += pw;
      pw *= graph_.n();
    }
    offset_.push_back(offset);
  }

  const Graph& graph() const noexcept { return graph_; }
  std::size_t n() const noexcept { return graph_.n(); }
  std::size_t k() const noexcept { return k_; }
  double d() const noexcept { return d_; }
  const Rational& d_exact() const noexcept { return d_exact_; }
  int depth() const noexcept { return t_; }

  std::uint64_t variable_count() const noexcept { return offset_.back(); }
  // Paths of length 0..t-1.
  std::uint64_t node_count() const noexcept { return offset_[static_cast<std::size_t>(t_)]; }
  std::uint64_t constraints_per_node() const noexcept {
    const std::uint64_t n = graph_.n();
    return 1 + n + n * (n - (n > 0 ? 1 : 0)) / 2 + n + 2 * n * n;
  }
  std::uint64_t constraint_count() const noexcept { return node_count() * constraints_per_node(); }

  std::uint64_t level_offset(int len) const { return offset_.at(static_cast<std::size_t>(len)); }

  std::uint64_t var_index(std::span<const Vertex> path) const {
    if (path.size() > static_cast<std::size_t>(t_) + 1) throw InvalidArgument("var_index: path too long");
    std::uint64_t idx = 0;
    for (Vertex v : path) {
      if (v >= n()) throw InvalidArgument("var_index: vertex out of range");
      idx = idx * n() + v;
    }
    return offset_[path.size()] + idx;
  }
  std::uint64_t var_index(std::initializer_list<Vertex> path) const {
    return var_index(std::span<const Vertex>(path.begin(), path.size()));
  }

  std::vector<Vertex> var_path(std::uint64_t index) const {
    if (index >= variable_count()) throw InvalidArgument("var_path: index out of range");
    std::size_t len = 0;
    while (offset_[len + 1] <= index) ++len;
    std::uint64_t rel = index - offset_[len];
    std::vector<Vertex> path(len);
    for (std::size_t i = len; i-- > 0;) {
      path[i] = static_cast<Vertex>(rel % n());
      rel /= n();
    }
    return path;
  }

  std::string var_name(std::uint64_t index) const {
    if (index == 0) return "h";
    std::string name = "y";
    for (Vertex v : var_path(index)) name += "_" + std::to_string(v);
    return name;
  }

  // Calls f(const Constraint&) for every constraint in id order. The
  // Constraint object is reused between calls.
  template <class F>
  void for_each_constraint(F&& f) const {
    const std::uint64_t n = graph_.n();
    const Rational one(1), minus_one(-1), minus_k(-static_cast<std::int64_t>(k_)), minus_d = -d_exact_;
    Constraint c;
    std::uint64_t id = 0;
    for (int level = 0; level < t_; ++level) {
      const std::uint64_t count = offset_[static_cast<std::size_t>(level) + 1] - offset_[static_cast<std::size_t>(level)];
      for (std::uint64_t q = 0; q < count; ++q) {
        const std::uint64_t yq = offset_[static_cast<std::size_t>(level)] + q;
        const std::uint64_t base1 = offset_[static_cast<std::size_t>(level) + 1] + q * n;
        const std::uint64_t base2 = offset_[static_cast<std::size_t>(level) + 2] + q * n * n;
        c.level = level;
        auto emit = [&](int family, Sense sense) {
          c.id = id++;
          c.family = family;
          c.sense = sense;
          f(static_cast<const Constraint&>(c));
        };
        // (1)
        c.terms.clear();
        for (std::uint64_t i = 0; i < n; ++i) c.terms.push_back({base1 + i, one});
        c.terms.push_back({yq, minus_k});
        emit(1, Sense::LessEq);
        // (2)
        for (std::uint64_t i = 0; i < n; ++i) {
          c.terms.clear();
          for (Vertex j : graph_.neighbors(static_cast<Vertex>(i))) c.terms.push_back({base2 + i * n + j, one});
          c.terms.push_back({base1 + i, minus_d});
          emit(2, Sense::GreaterEq);
        }
        // (3)
        for (std::uint64_t i = 0; i < n; ++i) {
          for (std::uint64_t j = i + 1; j < n; ++j) {
            c.terms.clear();
            c.terms.push_back({base2 + i * n + j, one});
            c.terms.push_back({base2 + j * n + i, minus_one});
            emit(3, Sense::Equal);
          }
        }
        // (4)
        for (std::uint64_t i = 0; i < n; ++i) {
          c.terms.clear();
          c.terms.push_back({base1 + i, one});
          c.terms.push_back({yq, minus_one});
          emit(4, Sense::LessEq);
        }
        for (std::uint64_t i = 0; i < n; ++i) {
          for (std::uint64_t j = 0; j < n; ++j) {
            c.terms.clear();
            c.terms.push_back({base2 + i * n + j, one});
            c.terms.push_back({base1 + i, minus_one});
            emit(4, Sense::LessEq);
          }
        }
        for (std::uint64_t i = 0; i < n * n; ++i) {
          c.terms.clear();
          c.terms.push_back({base2 + i, one});
          emit(4, Sense::GreaterEq);
        }
      }
    }
  }

 private:
  Graph graph_;
  std::size_t k_;
  double d_;
  Rational d_exact_;
  int t_;
  std::vector<std::uint64_t> offset_;  // offset_[len] = first index of paths of that length
};

inline LPInstance build_lp(const Graph& g, std::size_t k, double d, int t, const LPOptions& opts = {}) {
  return LPInstance(g, k, d, t, opts);
}

// Values for every variable, exact or floating.
struct LPAssignment {
  std::vector<Rational> exact;
  std::vector<double> approx;

  bool is_exact() const noexcept { return !exact.empty() || approx.empty(); }
  std::size_t size() const noexcept { return is_exact() ? exact.size() : approx.size(); }
  double value(std::uint64_t i) const { return is_exact() ? exact.at(i).to_double() : approx.at(i); }
};

// y_p = 1 iff every vertex of p lies in h_set (h = 1).
inline LPAssignment indicator_solution(const LPInstance& inst, const VertexSet& h_set, const Graph& g) {
  if (g.n() != inst.n()) throw InvalidArgument("indicator_solution: graph does not match the instance");
  check_members(g, h_set);
  if (h_set.size() > inst.k()) {
    throw InvalidArgument("indicator_solution: |H| = " + std::to_string(h_set.size()) + " exceeds k = " +
                          std::to_string(inst.k()));
  }
  std::vector<std::uint8_t> in(g.n(), 0);
  for (Vertex v : h_set) in[v] = 1;
  for (Vertex v : h_set) {
    std::int64_t deg = 0;
    for (Vertex u : g.neighbors(v)) deg += in[u];
    if (Rational(deg) < inst.d_exact()) {
      throw InvalidArgument("indicator_solution: vertex " + std::to_string(v) + " has degree " +
                            std::to_string(deg) + " in H, below d = " + inst.d_exact().str());
    }
  }
  LPAssignment a;
  a.exact.assign(inst.variable_count(), Rational(0));
  a.exact[0] = 1;
  const std::uint64_t n = inst.n();
  for (int len = 1; len <= inst.depth() + 1; ++len) {
    const std::uint64_t prev = inst.level_offset(len - 1);
    const std::uint64_t cur = inst.level_offset(len);
    const std::uint64_t count = cur - prev;
    for (std::uint64_t p = 0; p < count; ++p) {
      if (a.exact[prev + p].is_zero()) continue;
      for (Vertex v : h_set) a.exact[cur + p * n + v] = 1;
    }
  }
  return a;
}

struct Violation {
  std::uint64_t id = 0;
  int family = 0;
  int level = 0;
  double residual = 0.0;  // amount by which the constraint fails
};

struct FeasibilityReport {
  bool feasible = true;
  std::uint64_t checked = 0;
  std::uint64_t violation_count = 0;
  std::vector<Violation> violations;  // at most max_reported entries
};

// tol = 0 evaluates in exact arithmetic and needs an exact assignment;
// tol > 0 evaluates in floating point.
inline FeasibilityReport check_feasible(const LPInstance& inst, const LPAssignment& a, double tol,
                                        std::size_t max_reported = 1000) {
  if (tol < 0) throw InvalidArgument("check_feasible: negative tolerance");
  if (a.size() != inst.variable_count()) {
    throw InvalidArgument("check_feasible: assignment has " + std::to_string(a.size()) + " values, expected " +
                          std::to_string(inst.variable_count()));
  }
  const bool exact = tol == 0.0;
  if (exact && !a.is_exact()) throw InvalidArgument("check_feasible: exact mode needs rational values");

  FeasibilityReport rep;
  auto record = [&](const Constraint& c, double residual) {
    rep.feasible = false;
    ++rep.violation_count;
    if (rep.violations.size() < max_reported) rep.violations.push_back({c.id, c.family, c.level, residual});
  };
  const double d = inst.d();
  inst.for_each_constraint([&](const Constraint& c) {
    ++rep.checked;
    if (exact) {
      Rational lhs(0);
      for (const auto& term : c.terms) {
        const Rational& v = a.exact[term.var];
        if (!v.is_zero()) lhs += term.coef * v;
      }
      const bool ok = c.sense == Sense::LessEq      ? lhs <= Rational(0)
                      : c.sense == Sense::GreaterEq ? lhs >= Rational(0)
                                                    : lhs == Rational(0);
      if (!ok) {
        const double x = lhs.to_double();
        record(c, c.sense == Sense::GreaterEq ? -x : std::abs(x));
      }
    } else {
      double lhs = 0.0;
      for (const auto& term : c.terms) {
        const double coef = c.family == 2 && &term == &c.terms.back() ? -d : term.coef.to_double();
        lhs += coef * a.value(term.var);
      }
      const double residual = c.sense == Sense::LessEq      ? lhs
                              : c.sense == Sense::GreaterEq ? -lhs
                                                            : std::abs(lhs);
      if (residual > tol) record(c, residual);
    }
  });
  // The root homogenizer is pinned to 1.
  const bool root_ok = exact ? a.exact[0] == Rational(1) : std::abs(a.value(0) - 1.0) <= tol;
  if (!root_ok) {
    Constraint root;
    root.id = inst.constraint_count();
    root.family = 0;
    record(root, std::abs(a.value(0) - 1.0));
  }
  return rep;
}

// LP(S) = sum of top-level values y_i over S.
inline Rational lp_value_exact(const LPAssignment& a, const VertexSet& s) {
  Rational sum(0);
  for (Vertex v : s) sum += a.exact.at(1 + static_cast<std::uint64_t>(v));
  return sum;
}

inline double lp_value(const LPAssignment& a, const VertexSet& s) {
  if (a.is_exact()) return lp_value_exact(a, s).to_double();
  double sum = 0.0;
  for (Vertex v : s) sum += a.approx.at(1 + static_cast<std::uint64_t>(v));
  return sum;
}

// LP value of s under the solution conditioned on j: sum_{i in s} y_{ji}/y_j.
inline Rational conditioned_lp_value(const LPInstance& inst, const LPAssignment& a, Vertex j,
                                     const VertexSet& s) {
  const Rational& yj = a.exact.at(inst.var_index({j}));
  if (yj.is_zero()) throw InvalidArgument("conditioned_lp_value: y_j is zero");
  Rational sum(0);
  for (Vertex i : s) sum += a.exact.at(inst.var_index({j, i}));
  return sum / yj;
}

// CPLEX LP text. The objective weights the top-level variables (default 1).
inline void write_lp(std::ostream& out, const LPInstance& inst, const std::vector<double>& weights = {}) {
  if (!weights.empty() && weights.size() != inst.n()) throw InvalidArgument("export_lp: weight vector size mismatch");
  auto coef_str = [](const Rational& c) {
    std::ostringstream s;
    s.precision(17);
    s << c.to_double();
    return s.str();
  };
  out << "\\ DkS-hom depth " << inst.depth() << ": n = " << inst.n() << ", m = " << inst.graph().m()
      << ", k = " << inst.k() << ", d = " << inst.d_exact().str() << "\n";
  out << "Maximize\n obj:";
  for (std::size_t i = 0; i < inst.n(); ++i) {
    const double w = weights.empty() ? 1.0 : weights[i];
    std::ostringstream s;
    s.precision(17);
    s << w;
    out << (i == 0 ? " " : " + ") << s.str() << " " << inst.var_name(1 + i);
  }
  if (inst.n() == 0) out << " 0 h";
  out << "\nSubject To\n";
  inst.for_each_constraint([&](const Constraint& c) {
    if (c.family == 4 && c.sense == Sense::GreaterEq) return;  // nonnegativity: default bound
    out << " c" << c.id << ":";
    bool first = true;
    for (const auto& t : c.terms) {
      const Rational& v = t.coef;
      const bool neg = v < Rational(0);
      const Rational mag = neg ? -v : v;
      out << (first ? (neg ? " -" : " ") : (neg ? " - " : " + "));
      if (mag != Rational(1)) out << coef_str(mag) << " ";
      out << inst.var_name(t.var);
      first = false;
    }
    if (c.terms.empty()) out << " 0 h";
    out << (c.sense == Sense::LessEq ? " <= 0" : c.sense == Sense::GreaterEq ? " >= 0" : " = 0") << "\n";
  });
  out << "Bounds\n h = 1\nEnd\n";
}

inline void export_lp(const LPInstance& inst, const std::string& path, const std::vector<double>& weights = {}) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("export_lp: cannot open " + path);
  write_lp(out, inst, weights);
  if (!out) throw std::runtime_error("export_lp: write failed for " + path);
}

// Averaging step: given x in [0,1]^n with sum <= k, and P_j, Q_j >= 0 with
// sum x_j P_j >= P, sum x_j Q_j <= Q, returns some j with x_j > 0,
// P_j >= P/(2k) and P_j / Q_j >= P/(2Q). Empty when no such index exists.
inline std::optional<std::size_t> averaging_witness(const std::vector<double>& x, const std::vector<double>& p_j,
                                                    const std::vector<double>& q_j, double p, double q,
                                                    double k) {
  if (x.size() != p_j.size() || x.size() != q_j.size()) throw InvalidArgument("averaging_witness: size mismatch");
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (!(x[j] > 0)) continue;
    if (p_j[j] - p / (2 * k) >= p / (2 * q) * q_j[j]) return j;
  }
  return std::nullopt;
}

struct LemmaReplay {
  bool hypothesis = true;   // whether the lemma's precondition held
  bool dense = false;       // DkS-Local reached rho
  double local_density = 0.0;
  bool holds = true;        // conclusion (vacuous when !hypothesis)
  std::optional<Vertex> witness;
};

// Expansion step (rho >= 1): if LP(S)/|S| >= rho/d then DkS-Local(S, k) is rho-dense or
// LP(N(S)) >= d LP(S)/rho.
inline LemmaReplay replay_expand_lemma(const LPInstance& inst, const LPAssignment& a, const VertexSet& s,
                                       double rho) {
  LemmaReplay out;
  const Rational lp_s = lp_value_exact(a, s);
  const Rational r = Rational::from_double(rho);
  out.hypothesis = !s.empty() && rho >= 1.0 &&
                   lp_s * inst.d_exact() >= r * Rational(static_cast<std::int64_t>(s.size()));
  if (!out.hypothesis) return out;
  const auto local = dks_local(inst.graph(), s, inst.k());
  out.local_density = local.density;
  out.dense = local.density >= rho;
  const Rational lp_gamma = lp_value_exact(a, neighborhood(inst.graph(), s));
  out.holds = out.dense || lp_gamma * r >= inst.d_exact() * lp_s;
  return out;
}

// Contraction step (rho >= 1, d LP(S) > 0): DkS-Local(S, k) is rho-dense or some j with y_j > 0 has
// LP_j(S ∩ N(j)) >= d LP(S)/(2k) and
// LP_j(S ∩ N(j)) / |S ∩ N(j)| >= d LP(S) / (2 rho max{k, |S|}).
inline LemmaReplay replay_contract_lemma(const LPInstance& inst, const LPAssignment& a, const VertexSet& s,
                                         double rho) {
  LemmaReplay out;
  const Rational lp_s = s.empty() ? Rational(0) : lp_value_exact(a, s);
  // The averaging step needs d LP(S) > 0.
  out.hypothesis = !s.empty() && rho >= 1.0 && !lp_s.is_zero() && !inst.d_exact().is_zero();
  if (!out.hypothesis) return out;
  const auto local = dks_local(inst.graph(), s, inst.k());
  out.local_density = local.density;
  out.dense = local.density >= rho;
  if (out.dense) return out;
  const Rational r = Rational::from_double(rho);
  const auto k = static_cast<std::int64_t>(inst.k());
  const Rational first = inst.d_exact() * lp_s / Rational(2 * k);
  const Rational second_num = inst.d_exact() * lp_s;
  const Rational second_den = Rational(2) * r * Rational(std::max<std::int64_t>(k, static_cast<std::int64_t>(s.size())));
  for (Vertex j = 0; j < inst.n(); ++j) {
    if (a.exact.at(inst.var_index({j})).is_zero()) continue;
    const VertexSet part = set_intersection(s, neighborhood(inst.graph(), j));
    const Rational val = conditioned_lp_value(inst, a, j, part);
    if (val < first) continue;
    const Rational size(static_cast<std::int64_t>(part.size()));
    // val/|part| >= num/den, with |part| = 0 read as an infinite ratio.
    if (part.empty() ? true : val * second_den >= second_num * size) {
      out.witness = j;
      break;
    }
  }
  out.holds = out.witness.has_value();
  return out;
}

}  // namespace dks
