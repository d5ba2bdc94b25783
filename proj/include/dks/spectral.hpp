#pragma once

// Spectral quantities: the deflated second eigenvalue, the planted Rayleigh
// quotient, and the SDP dual certificate.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "dks/error.hpp"
#include "dks/graph.hpp"
#include "dks/random.hpp"
#include "dks/rational.hpp"

namespace dks {

// Dense eigen solves are limited to this many vertices.
inline constexpr std::size_t kDenseSpectrumLimit = 4000;

inline Eigen::MatrixXd adjacency_matrix(const Graph& g) {
  if (g.n() > kDenseSpectrumLimit) throw BudgetExceeded("adjacency_matrix: graph too large for a dense solve");
  const auto n = static_cast<Eigen::Index>(g.n());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : g.edges()) {
    a(e.u, e.v) = 1.0;
    a(e.v, e.u) = 1.0;
  }
  return a;
}

// Ascending eigenvalues of a symmetric matrix.
inline Eigen::VectorXd symmetric_eigenvalues(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigen solve failed");
  return solver.eigenvalues();
}

struct Lambda2Estimate {
  double value = 0.0;
  bool converged = false;
  int iterations = 0;  // summed over restarts
};

inline constexpr int kPowerRestarts = 3;
inline constexpr double kPowerTolerance = 1e-6;

// Largest |eigenvalue| of A restricted to the complement of the all-ones
// vector: power iteration on PAP with P = I - J/n, the estimate being
// ||PAPx|| for unit x. Stops when successive estimates differ by less than
// tol (relative). Best of `restarts` seeded starts.
inline Lambda2Estimate lambda2_estimate(const Graph& g, int iters, double tol, std::uint64_t seed,
                                        int restarts = kPowerRestarts) {
  const std::size_t n = g.n();
  if (n == 0) throw InvalidArgument("lambda2_estimate: empty graph");
  if (iters <= 0) throw InvalidArgument("lambda2_estimate: iteration cap must be positive");
  Lambda2Estimate best;
  if (n == 1) {
    best.converged = true;
    return best;
  }
  std::vector<double> x(n), y(n);
  auto deflate = [&](std::vector<double>& v) {
    double mean = 0.0;
    for (double e : v) mean += e;
    mean /= static_cast<double>(n);
    for (double& e : v) e -= mean;
  };
  auto norm = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double e : v) s += e * e;
    return std::sqrt(s);
  };
  for (int restart = 0; restart < restarts; ++restart) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(restart)));
    for (double& e : x) e = uniform01(rng) - 0.5;
    deflate(x);
    double nx = norm(x);
    if (nx == 0.0) continue;
    for (double& e : x) e /= nx;
    double prev = -1.0, value = 0.0;
    bool converged = false;
    int it = 0;
    for (; it < iters; ++it) {
      for (std::size_t v = 0; v < n; ++v) {
        double s = 0.0;
        for (Vertex u : g.neighbors(static_cast<Vertex>(v))) s += x[u];
        y[v] = s;
      }
      deflate(y);
      value = norm(y);
      if (value == 0.0) {
        converged = true;
        break;
      }
      for (std::size_t v = 0; v < n; ++v) x[v] = y[v] / value;
      if (prev >= 0.0 && std::abs(value - prev) <= tol * std::max(1.0, value)) {
        converged = true;
        ++it;
        break;
      }
      prev = value;
    }
    best.iterations += it;
    if (value > best.value || restart == 0) {
      best.value = std::max(best.value, value);
      best.converged = converged;
    }
  }
  return best;
}

inline Lambda2Estimate lambda2_estimate(const Graph& g, std::uint64_t seed) {
  return lambda2_estimate(g, static_cast<int>(std::max<std::size_t>(10 * g.n(), 100)), kPowerTolerance, seed);
}

struct RayleighResult {
  Rational quotient;
  Rational coordinate_sum;  // sum of x_i, zero by construction
  double value() const { return quotient.to_double(); }
};

// x^T A x / x^T x for x = 1 on h_set and -k/(n-k) elsewhere, with x^T A x
// summed over ordered adjacent pairs.
inline RayleighResult planted_rayleigh(const Graph& g, const VertexSet& h_set) {
  check_members(g, h_set);
  const auto n = static_cast<std::int64_t>(g.n());
  const auto k = static_cast<std::int64_t>(h_set.size());
  if (k <= 0 || k >= n) throw InvalidArgument("planted_rayleigh: need 0 < |H| < n");
  std::vector<std::uint8_t> in(g.n(), 0);
  for (Vertex v : h_set) in[v] = 1;
  std::int64_t inside = 0, across = 0, outside = 0;
  for (const auto& e : g.edges()) {
    const int c = in[e.u] + in[e.v];
    if (c == 2) ++inside;
    else if (c == 1) ++across;
    else ++outside;
  }
  const Rational other(-k, n - k);
  RayleighResult out;
  out.coordinate_sum = Rational(k) + Rational(n - k) * other;
  const Rational num = Rational(2) * (Rational(inside) + Rational(across) * other + Rational(outside) * other * other);
  const Rational den = Rational(k) + Rational(n - k) * other * other;
  out.quotient = num / den;
  return out;
}

struct SdpDualCertificate {
  double average_degree = 0.0;  // D = 2|E|/n
  double lambda2 = 0.0;         // top eigenvalue of A - (D/n)J
  double t = 0.0;               // lambda2 + kD/n
  double y = 0.0;               // D/n for every i
  double dual_value = 0.0;      // k^2 D/n + k lambda2
  double psd_margin = 0.0;      // min eigenvalue of (D/n)J - A + lambda2 I
};

// Dual solution y_i = D/n, t = lambda2 + kD/n, z = 0. lambda2 is the largest
// eigenvalue of A - (D/n)J, the smallest value making (D/n)J - A + lambda2 I
// positive semidefinite.
inline SdpDualCertificate sdp_dual_certificate(const Graph& g, std::size_t k) {
  SdpDualCertificate c;
  const std::size_t n = g.n();
  if (n == 0) return c;
  const double nd = static_cast<double>(n);
  const double kd = static_cast<double>(k);
  c.average_degree = 2.0 * static_cast<double>(g.m()) / nd;
  c.y = c.average_degree / nd;
  const Eigen::MatrixXd a = adjacency_matrix(g);
  const Eigen::MatrixXd centered = a - Eigen::MatrixXd::Constant(a.rows(), a.cols(), c.y);
  c.lambda2 = std::max(0.0, symmetric_eigenvalues(centered).maxCoeff());
  c.t = c.lambda2 + kd * c.y;
  c.dual_value = kd * kd * c.y + kd * c.lambda2;
  const Eigen::MatrixXd u = Eigen::MatrixXd::Constant(a.rows(), a.cols(), c.y) - a +
                            c.lambda2 * Eigen::MatrixXd::Identity(a.rows(), a.cols());
  c.psd_margin = symmetric_eigenvalues(u).minCoeff();
  return c;
}

}  // namespace dks
