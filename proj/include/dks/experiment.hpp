#pragma once

// Batch harness shared by the CLI and the acceptance runner: distinguisher
// parameter points, trial execution on a worker pool, and report output.

#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <fstream>
#include <functional>
#include <mutex>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "dks/error.hpp"
#include "dks/json_io.hpp"
#include "dks/random_models.hpp"

namespace dks {

inline constexpr int kConfigVersion = 1;

// Shortest round-trip decimal form; stable across runs and platforms.
inline std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header) : header_(std::move(header)) {}
  void row(const std::vector<std::string>& cells) {
    if (cells.size() != header_.size()) throw std::logic_error("csv row width mismatch");
    rows_.push_back(cells);
  }
  std::string str() const {
    std::ostringstream out;
    write_line(out, header_);
    for (const auto& r : rows_) write_line(out, r);
    return out.str();
  }
  void save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << str();
  }
  std::size_t size() const { return rows_.size(); }

 private:
  static void write_line(std::ostream& out, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << csv_field(cells[i]);
    out << "\n";
  }
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

// Runs f(i) for i in [0, count) on `threads` workers. Callers store results
// by index, so output order never depends on scheduling.
template <class F>
void parallel_for(std::size_t count, int threads, F&& f) {
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  const auto workers = std::min<std::size_t>(static_cast<std::size_t>(threads), count);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          f(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

// Rejects unknown keys and a missing or wrong version.
inline void validate_config(const Json& cfg, const std::set<std::string>& allowed) {
  if (!cfg.is_object()) throw InvalidArgument("config: top level must be an object");
  if (!cfg.contains("version")) throw InvalidArgument("config: missing \"version\"");
  if (!cfg["version"].is_number_integer() || cfg["version"].get<int>() != kConfigVersion) {
    throw InvalidArgument("config: unsupported version (expected " + std::to_string(kConfigVersion) + ")");
  }
  for (const auto& [key, value] : cfg.items()) {
    if (key != "version" && !allowed.contains(key)) throw InvalidArgument("config: unknown key \"" + key + "\"");
  }
}

enum class Test : std::uint8_t { Degree, Intersection, Spectral, Sdp, Caterpillar };

inline const char* to_string(Test t) {
  switch (t) {
    case Test::Degree: return "degree";
    case Test::Intersection: return "intersection";
    case Test::Spectral: return "spectral";
    case Test::Sdp: return "sdp";
    case Test::Caterpillar: return "caterpillar";
  }
  return "?";
}

inline Test parse_test(const std::string& name) {
  for (Test t : {Test::Degree, Test::Intersection, Test::Spectral, Test::Sdp, Test::Caterpillar})
    if (name == to_string(t)) return t;
  throw InvalidArgument("unknown distinguisher \"" + name + "\"");
}

// A parameter point: null G(n, n^(alpha-1)); the planted side replaces a
// random k-set by G(k, k^(beta-1)), or, when d > 0, by a graph with all
// degrees >= d.
struct DistinguishPoint {
  Test test = Test::Degree;
  std::size_t n = 0;
  double alpha = 0.5;
  std::size_t k = 0;
  double beta = 1.0;
  double d = 0.0;
  int r = 2;
  int s = 3;
  std::uint64_t budget = 200'000;
  double c = 0.0;
};

inline double log_base(double x, double base) { return std::log(x) / std::log(base); }

// Documented parameter points; thresholds use the frozen constants.
inline DistinguishPoint default_point(Test t) {
  DistinguishPoint p;
  p.test = t;
  switch (t) {
    case Test::Degree:  // planted clique K_20 in G(400, 0.05)
      p.n = 400;
      p.alpha = 1.0 + log_base(0.05, 400);
      p.k = 20;
      p.beta = 1.0;
      p.c = kDegreeC;
      break;
    case Test::Intersection:  // G(40, 0.8) in G(500, 0.1)
      p.n = 500;
      p.alpha = 1.0 + log_base(0.1, 500);
      p.k = 40;
      p.beta = 1.0 + log_base(0.8, 40);
      p.c = kIntersectionC;
      break;
    case Test::Spectral: {  // min degree 4(n^(rho/2) + k n^rho / n) on 100 vertices, n = 1000, rho = 1/2
      p.n = 1000;
      p.alpha = 0.5;
      p.k = 100;
      const double n = 1000.0;
      p.d = 4.0 * (std::pow(n, p.alpha / 2) + static_cast<double>(p.k) * std::pow(n, p.alpha) / n);
      p.c = kSpectralC;
      break;
    }
    case Test::Sdp:  // G(23, 1/2) in G(500, 0.01), k = ceil(sqrt(n))
      p.n = 500;
      p.alpha = 1.0 + log_base(0.01, 500);
      p.k = 23;
      p.beta = 1.0 + log_base(0.5, 23);
      p.c = kSdpC;
      break;
    case Test::Caterpillar:  // claws, G(400, 400^(beta-1)) in G(2000, 2000^(-1/3)), beta = 2/3 + 1/4
      p.n = 2000;
      p.alpha = 2.0 / 3.0;
      p.k = 400;
      p.beta = 2.0 / 3.0 + 0.25;
      p.r = 2;
      p.s = 3;
      p.budget = 20'000;
      p.c = kCaterpillarC;
      break;
  }
  return p;
}

inline PlantedInstance make_instance(const DistinguishPoint& p, bool planted, std::uint64_t seed) {
  if (!planted) return gen_null(p.n, p.alpha, seed);
  if (p.d > 0.0) {
    Rng rng(seed);
    const auto base_seed = rng();
    const auto h_seed = rng();
    const auto loc = sample_subset(static_cast<std::uint32_t>(p.n), static_cast<std::uint32_t>(p.k), rng);
    const auto base = gen_null(p.n, p.alpha, base_seed);
    return plant_arbitrary(base.graph, gen_min_degree(p.k, p.d, h_seed), VertexSet::from_sorted(loc), seed);
  }
  return plant(p.n, p.alpha, p.k, p.beta, seed);
}

inline DistinguishVerdict run_test(const DistinguishPoint& p, const Graph& g, std::uint64_t seed) {
  switch (p.test) {
    case Test::Degree:
      return degree_distinguisher(g, p.k, edge_probability(p.n, p.alpha) * static_cast<double>(p.n - 1), p.c);
    case Test::Intersection: return intersection_distinguisher(g, p.budget, seed, p.c);
    case Test::Spectral: return spectral_distinguisher(g, p.alpha, seed, p.c);
    case Test::Sdp: return sdp_distinguisher(g, p.k, p.c);
    case Test::Caterpillar: return caterpillar_distinguisher(g, p.r, p.s, p.budget, seed, p.c);
  }
  throw InvalidArgument("unknown distinguisher");
}

struct TrialOutcome {
  std::uint64_t seed = 0;
  bool truth_planted = false;
  DistinguishVerdict verdict;
  double seconds = 0.0;
  bool correct() const { return verdict.planted == truth_planted; }
};

// One instance per (seed, side): the instance seed is derived from the
// trial seed and the side.
inline TrialOutcome run_distinguish_trial(const DistinguishPoint& p, std::uint64_t seed, bool planted) {
  const auto start = std::chrono::steady_clock::now();
  const auto inst = make_instance(p, planted, derive_seed(seed, planted ? 1 : 0));
  TrialOutcome out;
  out.seed = seed;
  out.truth_planted = planted;
  out.verdict = run_test(p, inst.graph, derive_seed(seed, 2));
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

// Null and planted trials for every seed, ordered (seed, null, planted).
inline std::vector<TrialOutcome> run_distinguish(const DistinguishPoint& p, const std::vector<std::uint64_t>& seeds,
                                                 int threads) {
  std::vector<TrialOutcome> out(2 * seeds.size());
  parallel_for(out.size(), threads,
               [&](std::size_t i) { out[i] = run_distinguish_trial(p, seeds[i / 2], i % 2 == 1); });
  return out;
}

inline double accuracy(const std::vector<TrialOutcome>& trials) {
  if (trials.empty()) return 0.0;
  std::size_t ok = 0;
  for (const auto& t : trials) ok += t.correct();
  return static_cast<double>(ok) / static_cast<double>(trials.size());
}

inline std::vector<std::uint64_t> seed_range(std::uint64_t first, std::size_t count) {
  std::vector<std::uint64_t> s(count);
  for (std::size_t i = 0; i < count; ++i) s[i] = first + i;
  return s;
}

}  // namespace dks
