// dks: generate, plant, solve, distinguish, export LPs, and run sweeps.
//
// Exit codes: 0 ok, 1 usage, 2 runtime error, 3 budget exceeded.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dks/caterpillar.hpp"
#include "dks/exact.hpp"
#include "dks/experiment.hpp"
#include "dks/generators.hpp"
#include "dks/json_io.hpp"
#include "dks/lp.hpp"
#include "dks/random_models.hpp"
#include "dks/solver.hpp"

namespace {

using namespace dks;

// Options that may also come from the --config file. A value given on the
// command line wins over the config.
class Bindings {
 public:
  template <class T>
  CLI::Option* add(CLI::App* app, const std::string& flag, T& var, const std::string& desc) {
    auto* opt = app->add_option("--" + flag, var, desc);
    std::string key = flag;
    for (char& c : key)
      if (c == '-') c = '_';
    keys_.insert(key);
    appliers_.push_back([opt, key, &var](const Json& cfg) {
      if (opt->count() == 0 && cfg.contains(key)) {
        try {
          var = cfg[key].get<T>();
        } catch (const nlohmann::json::exception&) {
          throw InvalidArgument("config: bad value for \"" + key + "\"");
        }
      }
    });
    return opt;
  }

  // A key handled outside this binding set (the global flags).
  void allow(const std::string& key) { keys_.insert(key); }

  void apply(const std::string& path) const {
    if (path.empty()) return;
    Json cfg;
    try {
      cfg = load_json(path);
    } catch (const ParseError& e) {
      throw InvalidArgument(std::string("config: ") + e.what());
    }
    validate_config(cfg, keys_);
    for (const auto& f : appliers_) f(cfg);
  }

 private:
  std::set<std::string> keys_;
  std::vector<std::function<void(const Json&)>> appliers_;
};

struct Globals {
  std::uint64_t seed = 1;
  std::string out;
  std::string config;
  int threads = 1;
  std::uint64_t budget = 0;  // 0: command default
};

void require_out(const Globals& g) {
  if (g.out.empty()) throw InvalidArgument("--out is required");
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void save_timing(const std::string& path, const std::vector<double>& seconds) {
  CsvWriter w({"trial", "wall_seconds"});
  for (std::size_t i = 0; i < seconds.size(); ++i) w.row({std::to_string(i), format_double(seconds[i])});
  w.save(path);
}

// --- gen ---------------------------------------------------------------

struct GenOpts {
  std::size_t n = 0;
  double p = -1.0;
  double alpha = -1.0;
};

int cmd_gen(const Globals& g, const GenOpts& o) {
  require_out(g);
  if (o.n == 0) throw InvalidArgument("gen: --n is required");
  if ((o.p >= 0) == (o.alpha >= 0)) throw InvalidArgument("gen: give exactly one of --p and --alpha");
  const double p = o.p >= 0 ? o.p : edge_probability(o.n, o.alpha);
  const Graph graph = gen_gnp(o.n, p, g.seed);
  save_graph(g.out, graph);
  Json side;
  side["model"] = "null";
  side["params"] = {{"n", o.n}, {"p", p}, {"seed", g.seed}};
  side["planted"] = nullptr;
  save_json(g.out + ".json", side);
  return 0;
}

// --- plant -------------------------------------------------------------

struct PlantOpts {
  std::size_t n = 0;
  double alpha = 0.5;
  std::size_t k = 0;
  double beta = 0.75;
  std::string model = "random-planted";
  double d = 0.0;
};

int cmd_plant(const Globals& g, const PlantOpts& o) {
  require_out(g);
  if (o.n == 0 || o.k == 0) throw InvalidArgument("plant: --n and --k are required");
  PlantedInstance inst;
  if (o.model == "random-planted") {
    inst = plant(o.n, o.alpha, o.k, o.beta, g.seed);
  } else if (o.model == "dense-in-random") {
    if (o.d <= 0) throw InvalidArgument("plant: dense-in-random needs --d > 0");
    DistinguishPoint p;
    p.n = o.n;
    p.alpha = o.alpha;
    p.k = o.k;
    p.d = o.d;
    inst = make_instance(p, true, g.seed);
  } else {
    throw InvalidArgument("plant: unknown model \"" + o.model + "\"");
  }
  save_graph(g.out, inst.graph);
  save_json(g.out + ".json", sidecar_json(inst));
  return 0;
}

// --- solve -------------------------------------------------------------

struct SolveOpts {
  std::string input;
  std::size_t k = 0;
  std::string truth;
  int s_max = 4;
  int r = 0;
  int s = 0;
  std::size_t brute_force_limit = 18;
};

int cmd_solve(const Globals& g, const SolveOpts& o) {
  require_out(g);
  if (o.input.empty() || o.k == 0) throw InvalidArgument("solve: --input and --k are required");
  if ((o.r == 0) != (o.s == 0)) throw InvalidArgument("solve: give both --r and --s or neither");
  const auto t0 = std::chrono::steady_clock::now();
  const Graph graph = load_graph(o.input);
  ApproxConfig cfg;
  cfg.s_max = o.s_max;
  cfg.seed = g.seed;
  if (g.budget) cfg.leaf_budget = g.budget;
  if (o.r) cfg.rs = std::pair{o.r, o.s};
  SolveResult res = approximate(graph, o.k, cfg);

  std::optional<double> truth_density, brute;
  if (!o.truth.empty()) {
    const Json side = load_json(o.truth);
    if (side.contains("planted") && side["planted"].is_array()) {
      truth_density = average_degree(graph, vertex_set_from_json(side["planted"]));
      const int sr = res.rs ? res.rs->second - res.rs->first : 1;
      const int ss = res.rs ? res.rs->second : 2;
      const double dmax = static_cast<double>(std::max<std::size_t>(graph.max_degree(), 1));
      res.target_ratio = *truth_density / std::pow(dmax, static_cast<double>(sr) / ss);
    }
  }
  if (graph.n() <= o.brute_force_limit) brute = brute_force_dks(graph, o.k, binomial(graph.n(), o.k)).density;
  const double wall = seconds_since(t0);

  auto ratio = [&](const std::optional<double>& ref) -> std::string {
    if (!ref) return "";
    return res.density > 0 ? format_double(*ref / res.density) : "inf";
  };
  CsvWriter csv({"input", "n", "m", "k", "seed", "r", "s", "size", "density", "gamma", "provenance",
                 "truth_density", "ratio_vs_truth", "brute_force_density", "ratio_vs_brute"});
  csv.row({o.input, std::to_string(graph.n()), std::to_string(graph.m()), std::to_string(o.k),
           std::to_string(g.seed), res.rs ? std::to_string(res.rs->first) : "", res.rs ? std::to_string(res.rs->second) : "",
           std::to_string(res.vertices.size()), format_double(res.density), format_double(res.gamma), res.provenance,
           truth_density ? format_double(*truth_density) : "", ratio(truth_density),
           brute ? format_double(*brute) : "", ratio(brute)});
  csv.save(g.out + ".csv");

  Json j = to_json(res);
  j["input"] = o.input;
  j["k"] = o.k;
  j["seed"] = g.seed;
  if (truth_density) j["truth_density"] = *truth_density;
  if (brute) j["brute_force_density"] = *brute;
  save_json(g.out + ".json", j);
  save_timing(g.out + ".timing.csv", {wall});
  return 0;
}

// --- distinguish -------------------------------------------------------

struct DistinguishOpts {
  std::string test = "caterpillar";
  std::size_t trials = 50;
  std::size_t n = 0;
  std::size_t k = 0;
  double alpha = -1;
  double beta = -1;
  double d = -1;
  double c = -1;
};

int cmd_distinguish(const Globals& g, const DistinguishOpts& o) {
  require_out(g);
  DistinguishPoint p = default_point(parse_test(o.test));
  if (o.n) p.n = o.n;
  if (o.k) p.k = o.k;
  if (o.alpha >= 0) p.alpha = o.alpha;
  if (o.beta >= 0) p.beta = o.beta;
  if (o.d >= 0) p.d = o.d;
  if (o.c >= 0) p.c = o.c;
  if (g.budget) p.budget = g.budget;
  if (o.trials == 0) throw InvalidArgument("distinguish: --trials must be positive");

  const auto trials = run_distinguish(p, seed_range(g.seed, o.trials), g.threads);
  CsvWriter csv({"test", "model", "n", "alpha", "k", "beta", "d", "seed", "statistic", "value", "threshold",
                 "decision", "truth"});
  std::vector<double> seconds;
  std::size_t null_ok = 0, planted_ok = 0;
  for (const auto& t : trials) {
    csv.row({to_string(p.test), t.truth_planted ? (p.d > 0 ? "dense-in-random" : "random-planted") : "null",
             std::to_string(p.n), format_double(p.alpha), std::to_string(p.k), format_double(p.beta),
             format_double(p.d), std::to_string(t.seed), t.verdict.statistic, format_double(t.verdict.value),
             format_double(t.verdict.threshold), t.verdict.planted ? "planted" : "null",
             t.truth_planted ? "planted" : "null"});
    seconds.push_back(t.seconds);
    (t.truth_planted ? planted_ok : null_ok) += t.correct();
  }
  csv.save(g.out + ".csv");
  Json j;
  j["test"] = to_string(p.test);
  j["point"] = {{"n", p.n}, {"alpha", p.alpha}, {"k", p.k}, {"beta", p.beta}, {"d", p.d},
                {"r", p.r}, {"s", p.s}, {"budget", p.budget}, {"c", p.c}};
  j["seeds"] = o.trials;
  j["null_correct"] = null_ok;
  j["planted_correct"] = planted_ok;
  j["accuracy"] = accuracy(trials);
  save_json(g.out + ".json", j);
  save_timing(g.out + ".timing.csv", seconds);
  return 0;
}

// --- lp-export ---------------------------------------------------------

struct LpOpts {
  std::string input;
  std::size_t k = 0;
  double d = 0;
  int t = 1;
  int max_depth = kDefaultLpMaxDepth;
  std::string truth;
  std::vector<double> weights;
};

int cmd_lp_export(const Globals& g, const LpOpts& o) {
  require_out(g);
  if (o.input.empty() || o.k == 0) throw InvalidArgument("lp-export: --input and --k are required");
  const Graph graph = load_graph(o.input);
  LPOptions opts;
  opts.max_depth = o.max_depth;
  if (g.budget) opts.variable_budget = g.budget;
  const LPInstance inst = build_lp(graph, o.k, o.d, o.t, opts);
  export_lp(inst, g.out, o.weights);
  if (!o.truth.empty()) {
    const Json side = load_json(o.truth);
    if (!side.contains("planted") || !side["planted"].is_array()) throw InvalidArgument("lp-export: sidecar has no planted set");
    const auto a = indicator_solution(inst, vertex_set_from_json(side["planted"]), graph);
    save_json(g.out + ".violations.json", to_json(check_feasible(inst, a, 0.0)));
  }
  return 0;
}

// --- bench -------------------------------------------------------------

struct BenchOpts {
  std::size_t n = 400;
  std::vector<double> alphas{0.4, 0.5, 0.6};
  std::size_t trials = 5;
  int s_max = 4;
};

// For each alpha: null G(n, n^(alpha-1)) with k = n^(1-alpha) (so kD = n).
// The log-density barrier density is k^alpha; the empirical ratio divides
// it by the density approximate() finds on the null graph.
int cmd_bench(const Globals& g, const BenchOpts& o) {
  require_out(g);
  if (o.alphas.empty() || o.trials == 0) throw InvalidArgument("bench: need alphas and trials");
  struct Row {
    double alpha;
    std::uint64_t seed;
    std::size_t k;
    double found;
    double barrier;
    double seconds;
  };
  const auto seeds = seed_range(g.seed, o.trials);
  std::vector<Row> rows(o.alphas.size() * seeds.size());
  const double nd = static_cast<double>(o.n);
  parallel_for(rows.size(), g.threads, [&](std::size_t i) {
    const auto t0 = std::chrono::steady_clock::now();
    const double alpha = o.alphas[i / seeds.size()];
    const std::uint64_t seed = seeds[i % seeds.size()];
    const auto k = static_cast<std::size_t>(std::llround(std::pow(nd, 1.0 - alpha)));
    const auto inst = gen_null(o.n, alpha, derive_seed(seed, 0));
    ApproxConfig cfg;
    cfg.s_max = o.s_max;
    cfg.seed = derive_seed(seed, 1);
    if (g.budget) cfg.leaf_budget = g.budget;
    const auto res = approximate(inst.graph, std::clamp<std::size_t>(k, 1, o.n), cfg);
    rows[i] = {alpha, seed, k, res.density, std::pow(static_cast<double>(k), alpha), seconds_since(t0)};
  });
  CsvWriter csv({"alpha", "seed", "n", "k", "null_density", "barrier_density", "ratio", "theory_ratio"});
  std::vector<double> seconds;
  for (const auto& r : rows) {
    const double ratio = r.barrier / std::max(r.found, 1.0);
    csv.row({format_double(r.alpha), std::to_string(r.seed), std::to_string(o.n), std::to_string(r.k),
             format_double(r.found), format_double(r.barrier), format_double(ratio),
             format_double(std::pow(nd, r.alpha * (1 - r.alpha)))});
    seconds.push_back(r.seconds);
  }
  csv.save(g.out + ".csv");
  Json summary = Json::array();
  for (std::size_t a = 0; a < o.alphas.size(); ++a) {
    double sum = 0.0, found = 0.0;
    for (std::size_t s = 0; s < seeds.size(); ++s) {
      const auto& r = rows[a * seeds.size() + s];
      sum += r.barrier / std::max(r.found, 1.0);
      found += r.found;
    }
    const double m = static_cast<double>(seeds.size());
    summary.push_back({{"alpha", o.alphas[a]},
                       {"k", rows[a * seeds.size()].k},
                       {"mean_null_density", found / m},
                       {"mean_ratio", sum / m},
                       {"theory_ratio", std::pow(nd, o.alphas[a] * (1 - o.alphas[a]))}});
  }
  save_json(g.out + ".json", Json{{"n", o.n}, {"seeds", o.trials}, {"rows", summary}});
  save_timing(g.out + ".timing.csv", seconds);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Densest k-subgraph toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals globals;
  Bindings gen_b, plant_b, solve_b, dist_b, lp_b, bench_b;

  auto* seed_opt = app.add_option("--seed", globals.seed, "Base random seed");
  auto* out_opt = app.add_option("--out", globals.out, "Output path or prefix");
  app.add_option("--config", globals.config, "JSON config (version 1)");
  auto* threads_opt = app.add_option("--threads", globals.threads, "Worker threads")->check(CLI::PositiveNumber);
  auto* budget_opt = app.add_option("--budget", globals.budget, "Enumeration or variable budget");

  GenOpts gen;
  auto* c_gen = app.add_subcommand("gen", "Sample G(n, p)");
  gen_b.add(c_gen, "n", gen.n, "Vertices");
  gen_b.add(c_gen, "p", gen.p, "Edge probability");
  gen_b.add(c_gen, "alpha", gen.alpha, "Log-density (p = n^(alpha-1))");

  PlantOpts pl;
  auto* c_plant = app.add_subcommand("plant", "Plant a dense k-subgraph in G(n, n^(alpha-1))");
  plant_b.add(c_plant, "n", pl.n, "Vertices");
  plant_b.add(c_plant, "alpha", pl.alpha, "Host log-density");
  plant_b.add(c_plant, "k", pl.k, "Planted size");
  plant_b.add(c_plant, "beta", pl.beta, "Planted log-density");
  plant_b.add(c_plant, "model", pl.model, "random-planted or dense-in-random");
  plant_b.add(c_plant, "d", pl.d, "Planted minimum degree (dense-in-random)");

  SolveOpts so;
  auto* c_solve = app.add_subcommand("solve", "Approximate densest k-subgraph");
  solve_b.add(c_solve, "input", so.input, "Edge-list file");
  solve_b.add(c_solve, "k", so.k, "Subgraph size");
  solve_b.add(c_solve, "truth", so.truth, "Sidecar JSON with the planted set");
  solve_b.add(c_solve, "s-max", so.s_max, "Largest caterpillar length s");
  solve_b.add(c_solve, "r", so.r, "Override r");
  solve_b.add(c_solve, "s", so.s, "Override s");
  solve_b.add(c_solve, "brute-force-limit", so.brute_force_limit, "Largest n solved exactly for the ratio column");

  DistinguishOpts di;
  auto* c_dist = app.add_subcommand("distinguish", "Null vs planted trials for one distinguisher");
  dist_b.add(c_dist, "test", di.test, "degree, intersection, spectral, sdp, caterpillar");
  dist_b.add(c_dist, "trials", di.trials, "Seeds (each runs one null and one planted instance)");
  dist_b.add(c_dist, "n", di.n, "Override n");
  dist_b.add(c_dist, "k", di.k, "Override k");
  dist_b.add(c_dist, "alpha", di.alpha, "Override host log-density");
  dist_b.add(c_dist, "beta", di.beta, "Override planted log-density");
  dist_b.add(c_dist, "d", di.d, "Override planted minimum degree");
  dist_b.add(c_dist, "c", di.c, "Override threshold constant");

  LpOpts lp;
  auto* c_lp = app.add_subcommand("lp-export", "Write the flattened LP in CPLEX LP format");
  lp_b.add(c_lp, "input", lp.input, "Edge-list file");
  lp_b.add(c_lp, "k", lp.k, "Size bound");
  lp_b.add(c_lp, "d", lp.d, "Degree bound");
  lp_b.add(c_lp, "t", lp.t, "Depth");
  lp_b.add(c_lp, "max-depth", lp.max_depth, "Depth cap");
  lp_b.add(c_lp, "truth", lp.truth, "Sidecar JSON; writes an indicator violation report");
  lp_b.add(c_lp, "weights", lp.weights, "Objective weights (default all ones)");

  BenchOpts be;
  auto* c_bench = app.add_subcommand("bench", "Sweep alpha with k = n^(1-alpha)");
  bench_b.add(c_bench, "n", be.n, "Vertices");
  bench_b.add(c_bench, "alphas", be.alphas, "Log-density grid");
  bench_b.add(c_bench, "trials", be.trials, "Seeds per grid point");
  bench_b.add(c_bench, "s-max", be.s_max, "Largest caterpillar length s");

  for (auto* b : {&gen_b, &plant_b, &solve_b, &dist_b, &lp_b, &bench_b})
    for (const char* key : {"seed", "out", "threads", "budget"}) b->allow(key);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    // Globals from the config, unless given on the command line.
    auto apply_globals = [&](const Json& cfg) {
      if (!seed_opt->count() && cfg.contains("seed")) globals.seed = cfg["seed"].get<std::uint64_t>();
      if (!out_opt->count() && cfg.contains("out")) globals.out = cfg["out"].get<std::string>();
      if (!threads_opt->count() && cfg.contains("threads")) globals.threads = cfg["threads"].get<int>();
      if (!budget_opt->count() && cfg.contains("budget")) globals.budget = cfg["budget"].get<std::uint64_t>();
    };
    auto run = [&](Bindings& b, auto&& fn) {
      b.apply(globals.config);
      if (!globals.config.empty()) apply_globals(load_json(globals.config));
      return fn();
    };
    if (c_gen->parsed()) return run(gen_b, [&] { return cmd_gen(globals, gen); });
    if (c_plant->parsed()) return run(plant_b, [&] { return cmd_plant(globals, pl); });
    if (c_solve->parsed()) return run(solve_b, [&] { return cmd_solve(globals, so); });
    if (c_dist->parsed()) return run(dist_b, [&] { return cmd_distinguish(globals, di); });
    if (c_lp->parsed()) return run(lp_b, [&] { return cmd_lp_export(globals, lp); });
    if (c_bench->parsed()) return run(bench_b, [&] { return cmd_bench(globals, be); });
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
