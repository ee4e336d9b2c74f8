#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "smp/context.hpp"
#include "smp/graph.hpp"
#include "smp/params.hpp"

namespace smp {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct VerifyOptions {
  std::uint64_t seed = 7;
  // Negative control: the output side of every equivariance comparison uses
  // a permutation with two entries swapped, which must make the suite fail.
  bool corrupt_permutation = false;
};

inline const std::vector<std::string> kVerifySuites = {"equivariance", "oracles", "separation",
                                                       "gradients"};

/// Runs one suite ("equivariance", "oracles", "separation", "gradients") or
/// "all". Throws ArgumentError on an unknown suite name.
std::vector<CheckResult> run_verify(const std::string& suite, const VerifyOptions& opts = {});

// Individual checks, also used by the acceptance tests.
std::vector<CheckResult> verify_equivariance(const VerifyOptions& opts);
CheckResult check_powers_of_adjacency(std::uint64_t seed, std::size_t graphs = 500);
CheckResult check_receptive_field_random(std::uint64_t seed, std::size_t graphs = 1000);
CheckResult check_receptive_field_exhaustive(std::size_t max_nodes = 6);
CheckResult check_receptive_field_diameter(std::uint64_t seed);
CheckResult check_trace_triangles(std::uint64_t seed);
CheckResult check_spectral_radius(std::uint64_t seed);
CheckResult check_cycle_counts(std::uint64_t seed);
CheckResult check_coloring_validity(std::uint64_t seed, std::size_t graphs = 500);
CheckResult check_coloring_reduction(std::uint64_t seed);
CheckResult check_coloring_monotone(std::uint64_t seed);
CheckResult check_dataset_labels(std::uint64_t seed);
CheckResult check_separation_trace();
CheckResult check_separation_mpnn(std::uint64_t seed, std::size_t draws = 50);
CheckResult check_lifting(std::uint64_t seed, std::size_t instances = 100);
std::vector<CheckResult> verify_gradients(std::uint64_t seed, std::size_t instances = 20);

/// G(n, p) with a seeded generator.
Graph random_graph(std::size_t n, double p, Rng& rng);
/// Attaches uniform [-1, 1] node (and optionally edge) features.
void random_features(Graph& g, std::size_t node_dim, std::size_t edge_dim, Rng& rng);
double max_abs_diff(std::span<const double> a, std::span<const double> b);
/// One-hot layout (n blocks of n rows) filled with uniform [-1, 1] values.
LocalContext random_context(std::size_t n, std::size_t c, Rng& rng, bool requires_grad = false);

}  // namespace smp
