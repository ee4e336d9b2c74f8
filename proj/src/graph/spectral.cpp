#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "smp/errors.hpp"
#include "smp/graph_algorithms.hpp"

namespace smp {

namespace {

void shifted_product(const Graph& g, const std::vector<double>& x, std::vector<double>& y) {
  for (std::size_t i = 0; i < g.n(); ++i) {
    double acc = x[i];
    for (auto j : g.neighbors()[i]) acc += x[j];
    y[i] = acc;
  }
}

double norm(const std::vector<double>& v) {
  double acc = 0.0;
  for (double e : v) acc += e * e;
  return std::sqrt(acc);
}

}  // namespace

PowerIterationResult spectral_radius_power(const Graph& g, std::uint64_t seed, double tol,
                                           std::size_t max_iterations) {
  PowerIterationResult result;
  const std::size_t n = g.n();
  if (n == 0 || g.num_edges() == 0) {
    result.converged = true;
    return result;
  }
  // A is non-negative, so its spectral radius is its largest eigenvalue;
  // the +I shift makes that eigenvalue strictly dominant in magnitude.
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> start(0.5, 1.5);
  std::vector<double> x(n), y(n);
  for (auto& v : x) v = start(rng);
  double nx = norm(x);
  for (auto& v : x) v /= nx;

  for (std::size_t it = 1; it <= max_iterations; ++it) {
    shifted_product(g, x, y);
    double rayleigh = 0.0;
    for (std::size_t i = 0; i < n; ++i) rayleigh += x[i] * y[i];
    double residual = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = y[i] - rayleigh * x[i];
      residual += r * r;
    }
    result.value = rayleigh - 1.0;
    result.iterations = it;
    if (std::sqrt(residual) < tol) {
      result.converged = true;
      return result;
    }
    const double ny = norm(y);
    for (std::size_t i = 0; i < n; ++i) x[i] = y[i] / ny;
  }
  return result;
}

double spectral_radius_dense(const Graph& g) {
  const std::size_t n = g.n();
  if (n == 0) return 0.0;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                            static_cast<Eigen::Index>(n));
  for (const auto& e : g.edges()) {
    a(static_cast<Eigen::Index>(e.u), static_cast<Eigen::Index>(e.v)) = 1.0;
    a(static_cast<Eigen::Index>(e.v), static_cast<Eigen::Index>(e.u)) = 1.0;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a, Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();
  return std::max(std::abs(ev.minCoeff()), std::abs(ev.maxCoeff()));
}

double spectral_radius(const Graph& g) {
  auto power = spectral_radius_power(g);
  if (power.converged || g.n() > 64) return power.value;
  return spectral_radius_dense(g);
}

IntMatrix integer_matrix_power(const IntMatrix& a, unsigned p) {
  if (a.rows != a.cols) throw DimensionError("matrix power of a non-square matrix");
  const std::size_t n = a.rows;
  IntMatrix result(n, n, 0);
  for (std::size_t i = 0; i < n; ++i) result(i, i) = 1;
  for (unsigned step = 0; step < p; ++step) {
    IntMatrix next(n, n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < n; ++k) {
        const auto r = result(i, k);
        if (r == 0) continue;
        for (std::size_t j = 0; j < n; ++j) next(i, j) += r * a(k, j);
      }
    }
    result = std::move(next);
  }
  return result;
}

std::int64_t trace_power(const Graph& g, unsigned p) {
  if (p < 1) throw ArgumentError("trace_power needs p >= 1");
  const auto ap = integer_matrix_power(g.adjacency_matrix(), p);
  std::int64_t tr = 0;
  for (std::size_t i = 0; i < g.n(); ++i) tr += ap(i, i);
  return tr;
}

}  // namespace smp
