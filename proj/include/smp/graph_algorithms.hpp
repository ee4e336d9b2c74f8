#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "smp/graph.hpp"

namespace smp {

// ---- shortest paths -------------------------------------------------------

/// Unreachable pairs hold the sentinel n, which exceeds any path length.
using DistanceMatrix = Matrix<std::size_t>;

std::vector<std::size_t> bfs_distances(const Graph& g, std::size_t source);
DistanceMatrix all_pairs_shortest_paths(const Graph& g);
bool is_connected(const Graph& g);

struct MultitaskTargets {
  std::vector<double> dist;  // from the source; n where unreachable
  std::vector<double> ecc;   // per node, over its own component
  std::vector<double> lap;   // (D - A) x
  bool connected = false;
  double diameter = 0.0;     // max eccentricity over the source's component
  double radius = 0.0;       // spectral radius of A

  bool operator==(const MultitaskTargets&) const = default;
};

MultitaskTargets multitask_targets(const Graph& g, std::size_t source,
                                   std::span<const double> x);

// ---- spectra ----------------------------------------------------------------

struct PowerIterationResult {
  double value = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

/// Largest |eigenvalue| of A by power iteration on A + I from a seeded
/// positive start vector; stops when the residual norm drops below `tol`.
PowerIterationResult spectral_radius_power(const Graph& g, std::uint64_t seed = 0,
                                           double tol = 1e-10,
                                           std::size_t max_iterations = 10000);
/// Dense symmetric eigensolve.
double spectral_radius_dense(const Graph& g);
/// Power iteration, falling back to the dense solve (n <= 64) when it does
/// not converge.
double spectral_radius(const Graph& g);

/// trace(A^p), exact integer arithmetic.
std::int64_t trace_power(const Graph& g, unsigned p);
IntMatrix integer_matrix_power(const IntMatrix& a, unsigned p);

// ---- cycles -----------------------------------------------------------------

/// Number of simple cycles of length k, each counted once. Requires 3 <= k <= n.
std::uint64_t count_k_cycles(const Graph& g, std::size_t k);
bool has_k_cycle(const Graph& g, std::size_t k);
/// Every simple k-cycle in canonical form: starts at its smallest vertex and
/// of the two traversal directions uses the one with the smaller second vertex.
std::vector<std::vector<std::size_t>> enumerate_k_cycles(const Graph& g, std::size_t k);

// ---- receptive fields -------------------------------------------------------

/// Binary n x n matrix of edges (p, q) with d(i,p) <= l, d(i,q) <= l and
/// d(i,p) + d(i,q) < 2l. Requires l >= 1.
IntMatrix receptive_field(const Graph& g, std::size_t node, std::size_t l);
/// All receptive fields at depth l via the max-propagation recursion started
/// from the stars U_i = A_i^(1).
std::vector<IntMatrix> receptive_field_recursion(const Graph& g, std::size_t l);

}  // namespace smp
