#include "smp/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>

#include "smp/coloring.hpp"
#include "smp/datasets.hpp"
#include "smp/errors.hpp"
#include "smp/gradcheck.hpp"
#include "smp/graph_algorithms.hpp"
#include "smp/layers.hpp"
#include "smp/ops.hpp"
#include "smp/permutation.hpp"

namespace smp {

Graph random_graph(std::size_t n, double p, Rng& rng) {
  std::bernoulli_distribution coin(p);
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (coin(rng)) edges.emplace_back(i, j);
  return Graph(n, edges);
}

void random_features(Graph& g, std::size_t node_dim, std::size_t edge_dim, Rng& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  if (node_dim > 0) {
    std::vector<double> x(g.n() * node_dim);
    for (auto& v : x) v = u(rng);
    g.set_node_features(node_dim, std::move(x));
  }
  if (edge_dim > 0 && g.num_edges() > 0) {
    std::vector<double> y(g.num_edges() * edge_dim);
    for (auto& v : y) v = u(rng);
    g.set_edge_features(edge_dim, std::move(y));
  }
}

LocalContext random_context(std::size_t n, std::size_t c, Rng& rng, bool requires_grad) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(n * n * c);
  for (auto& x : v) x = u(rng);
  return init_local_context(Graph(n)).with_data(Tensor({n * n, c}, std::move(v), requires_grad));
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

namespace {

using Clock = std::chrono::steady_clock;

// Times `body`, which fills in passed/detail.
CheckResult timed(const std::string& name, const std::function<void(CheckResult&)>& body) {
  CheckResult r;
  r.name = name;
  const auto t0 = Clock::now();
  try {
    body(r);
  } catch (const std::exception& e) {
    r.passed = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  return r;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

std::size_t uniform_size(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

double uniform_real(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

void randomize(const ParamList& params, Rng& rng, double scale = 1.0) {
  for (const auto& p : params) {
    Tensor t = p.tensor;
    for (auto& v : t.mutable_values()) v = uniform_real(rng, -scale, scale);
  }
}

template <typename P>
ParamList collected(const P& p) {
  ParamList out;
  p.collect("p", out);
  return out;
}

Tensor random_matrix(std::size_t r, std::size_t c, Rng& rng, bool requires_grad = false) {
  std::vector<double> v(r * c);
  for (auto& x : v) x = uniform_real(rng, -1.0, 1.0);
  return Tensor({r, c}, std::move(v), requires_grad);
}

Permutation output_permutation(const Permutation& pi, bool corrupt) {
  if (!corrupt || pi.size() < 2) return pi;
  auto m = pi.mapping();
  std::swap(m[0], m[1]);
  return Permutation(std::move(m));
}

Graph random_connected_graph(std::size_t n, Rng& rng) {
  for (;;) {
    Graph g = random_graph(n, uniform_real(rng, 0.2, 0.7), rng);
    if (is_connected(g)) return g;
  }
}

std::size_t diameter(const Graph& g) {
  const auto d = all_pairs_shortest_paths(g);
  std::size_t out = 0;
  for (auto v : d.data) out = std::max(out, v);
  return out;
}

// ---- equivariance ----------------------------------------------------------

// f maps (context, graph) to a context; compares pi.f(U, G) with f(pi.U, pi.G).
CheckResult context_equivariance(
    const std::string& name, const VerifyOptions& opts, std::uint64_t salt,
    const std::function<LocalContext(const LocalContext&, const Graph&, Rng&)>& make_and_run,
    std::size_t c, std::size_t node_dim, std::size_t edge_dim) {
  return timed(name, [&](CheckResult& r) {
    Rng rng(opts.seed ^ salt);
    double worst = 0.0;
    for (std::size_t t = 0; t < 200; ++t) {
      const std::size_t n = uniform_size(rng, 4, 12);
      Graph g = random_graph(n, uniform_real(rng, 0.2, 0.6), rng);
      random_features(g, node_dim, edge_dim, rng);
      const LocalContext u = random_context(n, c, rng);
      const Permutation pi = Permutation::random(n, rng);
      const auto seed = rng();
      Rng params_a(seed), params_b(seed);
      const LocalContext out = make_and_run(u, g, params_a);
      const LocalContext lhs = permute_context(output_permutation(pi, opts.corrupt_permutation), out);
      const LocalContext rhs = make_and_run(permute_context(pi, u), permute_graph(pi, g), params_b);
      worst = std::max(worst, max_abs_diff(lhs.data.values(), rhs.data.values()));
    }
    r.passed = worst <= 1e-9;
    r.detail = "200 instances, max error " + fmt(worst);
  });
}

}  // namespace

std::vector<CheckResult> verify_equivariance(const VerifyOptions& opts) {
  std::vector<CheckResult> out;
  constexpr std::size_t c = 3;

  out.push_back(context_equivariance(
      "equivariance.equivariant_linear", opts, 1,
      [](const LocalContext& u, const Graph&, Rng& rng) {
        auto p = EquivLinearParams::init(c, 4, rng);
        randomize(collected(p), rng);
        return equivariant_linear(u, p);
      },
      c, 0, 0));

  out.push_back(context_equivariance(
      "equivariance.smp_fast", opts, 2,
      [](const LocalContext& u, const Graph& g, Rng& rng) {
        auto p = SmpLayerParams::fast(c, 4, rng);
        randomize(collected(p), rng);
        return smp_fast_layer(u, g, p);
      },
      c, 0, 0));

  out.push_back(context_equivariance(
      "equivariance.smp_default", opts, 3,
      [](const LocalContext& u, const Graph& g, Rng& rng) {
        auto p = SmpLayerParams::make_default(c, 4, g.edge_feature_dim(), 2, rng);
        randomize(collected(p), rng);
        return smp_default_layer(u, g, p);
      },
      c, 0, 2));

  out.push_back(context_equivariance(
      "equivariance.mpnn", opts, 4,
      [](const LocalContext& u, const Graph& g, Rng& rng) {
        auto p = MpnnLayerParams::init(c, 4, g.edge_feature_dim(), 2, rng);
        randomize(collected(p), rng);
        // Use the owner rows as node vectors.
        return node_vectors(mpnn_layer(gather_rows(u.data, u.owner_flat()), g, p));
      },
      c, 0, 2));

  out.push_back(context_equivariance(
      "equivariance.network_node_pool", opts, 5,
      [](const LocalContext& u, const Graph& g, Rng& rng) {
        auto fast = SmpLayerParams::fast(c, 4, rng);
        auto def = SmpLayerParams::make_default(4, 4, 0, 2, rng);
        auto head = NodePoolParams::init(4, 5, 2, rng);
        randomize(collected(fast), rng);
        randomize(collected(def), rng);
        randomize(collected(head), rng);
        return node_vectors(node_pool(smp_default_layer(smp_fast_layer(u, g, fast), g, def), head));
      },
      c, 0, 0));

  out.push_back(timed("equivariance.network_graph_extract", [&](CheckResult& r) {
    Rng rng(opts.seed ^ 6);
    double worst = 0.0;
    for (std::size_t t = 0; t < 200; ++t) {
      const std::size_t n = uniform_size(rng, 4, 12);
      const Graph g = random_graph(n, uniform_real(rng, 0.2, 0.6), rng);
      const LocalContext u = random_context(n, c, rng);
      const Permutation pi = Permutation::random(n, rng);
      auto fast = SmpLayerParams::fast(c, 4, rng);
      auto def = SmpLayerParams::make_default(4, 4, 0, 2, rng);
      auto head = MlpParams::init(mlp_dims(8, 5, 1, 3), rng);
      randomize(collected(fast), rng);
      randomize(collected(def), rng);
      auto run = [&](const LocalContext& x, const Graph& gg) {
        return graph_extract(smp_default_layer(smp_fast_layer(x, gg, fast), gg, def), head);
      };
      const Tensor a = run(u, g);
      Tensor b = run(permute_context(pi, u), permute_graph(pi, g));
      if (opts.corrupt_permutation) {
        // Compare against a relabelled input that is not the same graph.
        const Permutation bad = output_permutation(pi, true);
        LocalContext pu = permute_context(pi, u);
        b = run(pu, permute_graph(bad, g));
      }
      worst = std::max(worst, max_abs_diff(a.values(), b.values()));
    }
    r.passed = worst <= 1e-9;
    r.detail = "200 instances, max error " + fmt(worst);
  }));

  out.push_back(timed("equivariance.fast_single_vs_per_edge", [&](CheckResult& r) {
    Rng rng(opts.seed ^ 7);
    double worst = 0.0;
    for (std::size_t t = 0; t < 200; ++t) {
      const std::size_t n = uniform_size(rng, 4, 12);
      const Graph g = random_graph(n, uniform_real(rng, 0.2, 0.6), rng);
      const LocalContext u = random_context(n, c, rng);
      auto p = SmpLayerParams::fast(c, 4, rng);
      randomize(collected(p), rng);
      worst = std::max(worst, max_abs_diff(smp_fast_layer(u, g, p).data.values(),
                                           smp_fast_layer_per_edge(u, g, p).data.values()));
    }
    r.passed = worst <= 1e-12;
    r.detail = "200 instances, max difference " + fmt(worst);
  }));
  return out;
}

// ---- oracles ---------------------------------------------------------------

CheckResult check_powers_of_adjacency(std::uint64_t seed, std::size_t graphs) {
  return timed("oracles.powers_of_adjacency", [&](CheckResult& r) {
    Rng rng(seed ^ 11);
    std::size_t compared = 0;
    for (std::size_t t = 0; t < graphs; ++t) {
      const std::size_t n = uniform_size(rng, 1, 10);
      const Graph g = random_graph(n, uniform_real(rng, 0.1, 0.8), rng);
      const auto a = g.adjacency_matrix();
      for (std::size_t l = 1; l <= 4; ++l) {
        const auto expected = integer_matrix_power(a, static_cast<unsigned>(l));
        const auto u = sum_propagation_power(g, l);
        for (std::size_t i = 0; i < n; ++i) {
          for (std::size_t j = 0; j < n; ++j) {
            if (u.at(i, j, 0) != static_cast<double>(expected(i, j))) {
              r.passed = false;
              r.detail = "graph " + std::to_string(t) + ", l=" + std::to_string(l) + ", entry (" +
                         std::to_string(i) + "," + std::to_string(j) + ") differs";
              return;
            }
            ++compared;
          }
        }
      }
    }
    r.passed = true;
    r.detail = std::to_string(graphs) + " graphs, l=1..4, " + std::to_string(compared) +
               " entries exact";
  });
}

namespace {

bool receptive_fields_agree(const Graph& g, std::size_t l, std::string& why) {
  const auto rec = receptive_field_recursion(g, l);
  for (std::size_t i = 0; i < g.n(); ++i) {
    if (!(rec[i] == receptive_field(g, i, l))) {
      why = "node " + std::to_string(i) + ", l=" + std::to_string(l);
      return false;
    }
  }
  return true;
}

}  // namespace

CheckResult check_receptive_field_random(std::uint64_t seed, std::size_t graphs) {
  return timed("oracles.receptive_field_random", [&](CheckResult& r) {
    Rng rng(seed ^ 12);
    for (std::size_t t = 0; t < graphs; ++t) {
      const Graph g = random_graph(uniform_size(rng, 1, 8), uniform_real(rng, 0.1, 0.8), rng);
      for (std::size_t l = 1; l <= 4; ++l) {
        std::string why;
        if (!receptive_fields_agree(g, l, why)) {
          r.passed = false;
          r.detail = "graph " + std::to_string(t) + ": " + why;
          return;
        }
      }
    }
    r.passed = true;
    r.detail = std::to_string(graphs) + " random graphs (n<=8), l=1..4, all nodes agree";
  });
}

CheckResult check_receptive_field_exhaustive(std::size_t max_nodes) {
  return timed("oracles.receptive_field_exhaustive", [&](CheckResult& r) {
    std::size_t connected = 0;
    for (std::size_t n = 1; n <= max_nodes; ++n) {
      std::vector<std::pair<std::size_t, std::size_t>> pairs;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
      const std::uint64_t masks = std::uint64_t{1} << pairs.size();
      for (std::uint64_t mask = 0; mask < masks; ++mask) {
        std::vector<std::pair<std::size_t, std::size_t>> edges;
        for (std::size_t b = 0; b < pairs.size(); ++b)
          if (mask >> b & 1U) edges.push_back(pairs[b]);
        const Graph g(n, edges);
        if (!is_connected(g)) continue;
        ++connected;
        for (std::size_t l = 1; l <= 4; ++l) {
          std::string why;
          if (!receptive_fields_agree(g, l, why)) {
            r.passed = false;
            r.detail = "n=" + std::to_string(n) + " mask " + std::to_string(mask) + ": " + why;
            return;
          }
        }
      }
    }
    r.passed = true;
    r.detail = "all " + std::to_string(connected) + " connected labelled graphs on <= " +
               std::to_string(max_nodes) + " nodes, l=1..4";
  });
}

CheckResult check_receptive_field_diameter(std::uint64_t seed) {
  return timed("oracles.receptive_field_full_graph", [&](CheckResult& r) {
    Rng rng(seed ^ 13);
    // Bipartite graphs have no edge with both ends equidistant from a node,
    // so the depth-diameter field is already the whole graph.
    std::size_t checked = 0;
    for (std::size_t t = 0; t < 300; ++t) {
      const std::size_t n = uniform_size(rng, 2, 10);
      const std::size_t left = uniform_size(rng, 1, n - 1);
      Graph g;
      for (;;) {
        std::bernoulli_distribution coin(uniform_real(rng, 0.3, 0.9));
        std::vector<std::pair<std::size_t, std::size_t>> edges;
        for (std::size_t i = 0; i < left; ++i)
          for (std::size_t j = left; j < n; ++j)
            if (coin(rng)) edges.emplace_back(i, j);
        g = Graph(n, edges);
        if (is_connected(g)) break;
      }
      const auto rec = receptive_field_recursion(g, diameter(g));
      for (const auto& a : rec) {
        if (!(a == g.adjacency_matrix())) {
          r.passed = false;
          r.detail = "bipartite graph " + std::to_string(t) + ": depth-diameter field is not A";
          return;
        }
      }
      ++checked;
    }
    // Any connected graph is fully covered one layer later.
    for (std::size_t t = 0; t < 300; ++t) {
      const Graph g = random_connected_graph(uniform_size(rng, 2, 10), rng);
      const auto rec = receptive_field_recursion(g, diameter(g) + 1);
      for (const auto& a : rec) {
        if (!(a == g.adjacency_matrix())) {
          r.passed = false;
          r.detail = "connected graph " + std::to_string(t) + ": depth diameter+1 field is not A";
          return;
        }
      }
      ++checked;
    }
    r.passed = true;
    r.detail = std::to_string(checked) + " graphs: bipartite at depth diameter, all at diameter+1";
  });
}

CheckResult check_trace_triangles(std::uint64_t seed) {
  return timed("oracles.trace_cubed_vs_triangles", [&](CheckResult& r) {
    Rng rng(seed ^ 14);
    for (std::size_t t = 0; t < 500; ++t) {
      const Graph g = random_graph(uniform_size(rng, 3, 12), uniform_real(rng, 0.1, 0.9), rng);
      const auto tr = trace_power(g, 3);
      const auto tri = count_k_cycles(g, 3);
      if (tr != 6 * static_cast<std::int64_t>(tri)) {
        r.passed = false;
        r.detail = "graph " + std::to_string(t) + ": tr(A^3)=" + std::to_string(tr) +
                   ", triangles=" + std::to_string(tri);
        return;
      }
    }
    r.passed = true;
    r.detail = "500 random graphs: tr(A^3) = 6 x triangles";
  });
}

CheckResult check_spectral_radius(std::uint64_t seed) {
  return timed("oracles.spectral_radius", [&](CheckResult& r) {
    Rng rng(seed ^ 15);
    double worst = 0.0;
    for (std::size_t t = 0; t < 500; ++t) {
      const Graph g = random_graph(uniform_size(rng, 1, 12), uniform_real(rng, 0.1, 0.9), rng);
      const auto power = spectral_radius_power(g, t);
      if (!power.converged) {
        r.passed = false;
        r.detail = "power iteration did not converge on graph " + std::to_string(t);
        return;
      }
      worst = std::max(worst, std::abs(power.value - spectral_radius_dense(g)));
    }
    r.passed = worst <= 1e-8;
    r.detail = "500 graphs (n<=12), max |power - dense| " + fmt(worst);
  });
}

namespace {

// Ordered k-tuples of distinct vertices closing into a cycle, divided by the
// 2k rotations and reflections of each cycle.
std::uint64_t brute_force_cycles(const Graph& g, std::size_t k) {
  std::vector<std::size_t> path;
  std::vector<char> used(g.n(), 0);
  std::uint64_t closed = 0;
  std::function<void()> grow = [&] {
    if (path.size() == k) {
      if (g.has_edge(path.back(), path.front())) ++closed;
      return;
    }
    for (std::size_t v = 0; v < g.n(); ++v) {
      if (used[v] || (!path.empty() && !g.has_edge(path.back(), v))) continue;
      used[v] = 1;
      path.push_back(v);
      grow();
      path.pop_back();
      used[v] = 0;
    }
  };
  grow();
  return closed / (2 * k);
}

}  // namespace

CheckResult check_cycle_counts(std::uint64_t seed) {
  return timed("oracles.cycle_counts", [&](CheckResult& r) {
    Rng rng(seed ^ 16);
    for (std::size_t t = 0; t < 300; ++t) {
      const std::size_t n = uniform_size(rng, 3, 7);
      const Graph g = random_graph(n, uniform_real(rng, 0.2, 0.9), rng);
      const Graph h = permute_graph(Permutation::random(n, rng), g);
      for (std::size_t k = 3; k <= n; ++k) {
        const auto count = count_k_cycles(g, k);
        if (count != brute_force_cycles(g, k) || count != count_k_cycles(h, k) ||
            count != enumerate_k_cycles(g, k).size() || has_k_cycle(g, k) != (count > 0)) {
          r.passed = false;
          r.detail = "graph " + std::to_string(t) + ", k=" + std::to_string(k) + ": count " +
                     std::to_string(count) + " disagrees";
          return;
        }
      }
    }
    r.passed = true;
    r.detail = "300 graphs (n<=7): DFS count = brute force = count after relabelling";
  });
}

CheckResult check_coloring_validity(std::uint64_t seed, std::size_t graphs) {
  return timed("oracles.coloring_validity", [&](CheckResult& r) {
    Rng rng(seed ^ 17);
    for (std::size_t t = 0; t < graphs; ++t) {
      const std::size_t n = uniform_size(rng, 1, 30);
      const Graph g = random_graph(n, uniform_real(rng, 0.02, 0.3), rng);
      const std::size_t L = uniform_size(rng, 1, 3);
      const auto ca = color_nodes(g, L);
      const auto d = all_pairs_shortest_paths(g);
      std::size_t used = 0;
      for (auto c : ca.colors) used = std::max(used, c + 1);
      bool ok = ca.chi == used && ca.chi <= std::max<std::size_t>(n, 1);
      for (std::size_t i = 0; i < n && ok; ++i)
        for (std::size_t j = i + 1; j < n && ok; ++j)
          if (d(i, j) <= 2 * L && ca.colors[i] == ca.colors[j]) ok = false;
      if (!ok) {
        r.passed = false;
        r.detail = "graph " + std::to_string(t) + " (n=" + std::to_string(n) + ", L=" +
                   std::to_string(L) + ") has a clash";
        return;
      }
    }
    r.passed = true;
    r.detail = std::to_string(graphs) + " graphs (n<=30, L<=3), no two nodes within 2L share a color";
  });
}

CheckResult check_coloring_reduction(std::uint64_t seed) {
  return timed("oracles.coloring_distinct_colors", [&](CheckResult& r) {
    Rng rng(seed ^ 18);
    double worst = 0.0;
    for (std::size_t t = 0; t < 100; ++t) {
      Graph g = random_connected_graph(uniform_size(rng, 3, 10), rng);
      random_features(g, 2, 0, rng);
      const std::size_t L = std::max<std::size_t>(1, (diameter(g) + 1) / 2);
      const auto ca = color_nodes(g, L);
      if (ca.chi != g.n()) {
        r.passed = false;
        r.detail = "graph " + std::to_string(t) + ": expected n colors";
        return;
      }
      std::vector<SmpLayerParams> layers;
      std::size_t c = 3;
      for (std::size_t l = 0; l < L; ++l) {
        layers.push_back(SmpLayerParams::fast(c, 4, rng));
        randomize(collected(layers.back()), rng, 0.5);
        c = 4;
      }
      LocalContext plain = init_local_context(g);
      LocalContext colored = init_colored_context(g, ca);
      for (const auto& p : layers) {
        plain = smp_fast_layer(plain, g, p);
        colored = smp_fast_layer(colored, g, p);
      }
      for (std::size_t i = 0; i < g.n(); ++i)
        for (std::size_t j = 0; j < g.n(); ++j)
          for (std::size_t k = 0; k < c; ++k)
            worst = std::max(worst, std::abs(plain.at(i, j, k) - colored.at(i, ca.colors[j], k)));
    }
    r.passed = worst <= 1e-9;
    r.detail = "100 graphs with chi = n, max difference to one-hot run " + fmt(worst);
  });
}

CheckResult check_coloring_monotone(std::uint64_t seed) {
  return timed("oracles.coloring_monotone", [&](CheckResult& r) {
    Rng rng(seed ^ 19);
    for (std::size_t t = 0; t < 200; ++t) {
      const Graph g = random_graph(uniform_size(rng, 1, 30), uniform_real(rng, 0.02, 0.3), rng);
      std::size_t prev = 0;
      for (std::size_t L = 1; L <= 4; ++L) {
        const auto chi = color_nodes(g, L).chi;
        if (chi < prev) {
          r.passed = false;
          r.detail = "graph " + std::to_string(t) + ": chi drops at L=" + std::to_string(L);
          return;
        }
        prev = chi;
      }
    }
    r.passed = true;
    r.detail = "200 graphs, chi non-decreasing for L=1..4";
  });
}

CheckResult check_dataset_labels(std::uint64_t seed) {
  return timed("oracles.dataset_labels", [&](CheckResult& r) {
    const Dataset sets[] = {generate_cycle_dataset(4, 12, 100, seed),
                            generate_cycle_dataset(6, 14, 40, seed + 1),
                            generate_multitask_dataset(60, 5, 12, seed)};
    for (const auto& ds : sets) {
      if (auto bad = check_labels(ds)) {
        r.passed = false;
        r.detail = ds.task + ": " + *bad;
        return;
      }
      if (ds.task == "cycles") {
        long pos = 0;
        for (const auto& rec : ds.records) pos += rec.label;
        const long neg = static_cast<long>(ds.records.size()) - pos;
        if (std::abs(pos - neg) > 1) {
          r.passed = false;
          r.detail = "cycle dataset unbalanced";
          return;
        }
      }
    }
    r.passed = true;
    r.detail = "generated cycle and multitask labels match the oracles; classes balanced";
  });
}

// ---- separation ------------------------------------------------------------

CheckResult check_separation_trace() {
  return timed("separation.trace_cubed", [](CheckResult& r) {
    const Graph hexagon = cycle_graph(6);
    const Graph triangles = disjoint_union(cycle_graph(3), cycle_graph(3));
    auto smp_trace = [](const Graph& g) {
      // Sum propagation to A^3, then the trace part of the invariant readout.
      const LocalContext u = sum_propagation_power(g, 3);
      return graph_extract(u, MlpParams::from_layers({Tensor::matrix({{1.0}, {0.0}})},
                                                     {Tensor::zeros({1})}))
          .item();
    };
    const double a = smp_trace(hexagon);
    const double b = smp_trace(triangles);
    const auto ta = trace_power(hexagon, 3);
    const auto tb = trace_power(triangles, 3);
    r.passed = a == static_cast<double>(ta) && b == static_cast<double>(tb) && ta == 0 &&
               tb == 12 && a != b;
    r.detail = "SMP readout C6=" + std::to_string(a) + ", 2xC3=" + std::to_string(b) +
               "; tr(A^3) C6=" + std::to_string(ta) + ", 2xC3=" + std::to_string(tb);
  });
}

CheckResult check_separation_mpnn(std::uint64_t seed, std::size_t draws) {
  return timed("separation.mpnn_readouts_equal", [&](CheckResult& r) {
    Rng rng(seed ^ 21);
    const Graph hexagon = cycle_graph(6);
    const Graph triangles = disjoint_union(cycle_graph(3), cycle_graph(3));
    double worst = 0.0;
    for (std::size_t t = 0; t < draws; ++t) {
      std::vector<MpnnLayerParams> layers;
      std::size_t c = 1;
      for (std::size_t l = 0; l < 3; ++l) {
        layers.push_back(MpnnLayerParams::init(c, 8, 0, 2, rng));
        randomize(collected(layers.back()), rng);
        c = 8;
      }
      auto readout = [&](const Graph& g) {
        Tensor x = init_node_states(g);
        for (const auto& p : layers) x = mpnn_layer(x, g, p);
        return block_mean(x, x.rows());
      };
      worst = std::max(worst, max_abs_diff(readout(hexagon).values(), readout(triangles).values()));
    }
    r.passed = worst <= 1e-12;
    r.detail = std::to_string(draws) + " weight draws, max readout difference " + fmt(worst);
  });
}

CheckResult check_lifting(std::uint64_t seed, std::size_t instances) {
  return timed("separation.mpnn_lifting", [&](CheckResult& r) {
    Rng rng(seed ^ 22);
    double diag = 0.0, off = 0.0;
    for (std::size_t t = 0; t < instances; ++t) {
      const std::size_t n = uniform_size(rng, 2, 8);
      Graph g = random_graph(n, uniform_real(rng, 0.2, 0.7), rng);
      random_features(g, uniform_size(rng, 0, 2), 2 * uniform_size(rng, 0, 1), rng);
      std::vector<MpnnLayerParams> mpnn;
      std::size_t c = 1 + g.node_feature_dim();
      const std::size_t depth = uniform_size(rng, 0, 3);
      for (std::size_t l = 0; l < depth; ++l) {
        const std::size_t width = uniform_size(rng, 2, 5);
        mpnn.push_back(MpnnLayerParams::init(c, width, g.edge_feature_dim(), uniform_size(rng, 1, 2), rng));
        randomize(collected(mpnn.back()), rng, 0.8);
        c = width;
      }
      Tensor x = init_node_states(g);
      for (const auto& p : mpnn) x = mpnn_layer(x, g, p);
      LocalContext u = init_local_context(g);
      for (const auto& p : lift_mpnn_to_smp(mpnn, n)) u = smp_default_layer(u, g, p);
      diag = std::max(diag, max_abs_diff(lifted_states(u, depth).values(), x.values()));
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (j != i)
            for (std::size_t k = 0; k < u.channels(); ++k) off = std::max(off, std::abs(u.at(i, j, k)));
    }
    r.passed = diag <= 1e-9 && off <= 1e-12;
    r.detail = std::to_string(instances) + " random MPNNs (0-3 layers, n<=8): diagonal error " +
               fmt(diag) + ", max off-diagonal " + fmt(off);
  });
}

// ---- gradients -------------------------------------------------------------

namespace {

CheckResult gradient_check(const std::string& name, std::uint64_t seed, std::size_t instances,
                           const std::function<std::pair<std::function<Tensor()>, ParamList>(Rng&)>& build) {
  return timed(name, [&](CheckResult& r) {
    Rng rng(seed);
    double worst = 0.0;
    std::size_t entries = 0, skipped = 0;
    for (std::size_t t = 0; t < instances; ++t) {
      auto [f, params] = build(rng);
      const auto res = finite_difference_check(f, params, 1e-5);
      worst = std::max(worst, res.max_relative_error);
      entries += res.entries;
      skipped += res.skipped_kinks;
    }
    const double skipped_fraction = entries ? static_cast<double>(skipped) / entries : 0.0;
    r.passed = worst <= 1e-4 && skipped_fraction <= 0.05;
    r.detail = std::to_string(instances) + " instances, " + std::to_string(entries) +
               " entries, max relative error " + fmt(worst) + ", " + std::to_string(skipped) +
               " entries skipped at kinks";
  });
}

// Random linear functional of the output, so every output entry matters.
Tensor probe(const Tensor& out, Rng& rng) {
  return sum(mul(out, random_matrix(out.rows(), out.cols(), rng)));
}

}  // namespace

std::vector<CheckResult> verify_gradients(std::uint64_t seed, std::size_t instances) {
  std::vector<CheckResult> out;
  constexpr std::size_t c = 3;

  out.push_back(gradient_check("gradients.equivariant_linear", seed ^ 31, instances, [](Rng& rng) {
    const std::size_t n = uniform_size(rng, 3, 6);
    auto u = random_context(n, c, rng, true);
    auto p = EquivLinearParams::init(c, 4, rng);
    ParamList params = collected(p);
    randomize(params, rng);
    params.push_back({"U", u.data});
    const Tensor weights = random_matrix(n * n, 4, rng);
    return std::make_pair(std::function<Tensor()>([=] {
                            return sum(mul(equivariant_linear(u, p).data, weights));
                          }),
                          params);
  }));

  out.push_back(gradient_check("gradients.smp_fast", seed ^ 32, instances, [](Rng& rng) {
    const std::size_t n = uniform_size(rng, 3, 6);
    const Graph g = random_graph(n, 0.5, rng);
    auto u = random_context(n, c, rng, true);
    auto p = SmpLayerParams::fast(c, 4, rng);
    ParamList params = collected(p);
    randomize(params, rng);
    params.push_back({"U", u.data});
    const Tensor weights = random_matrix(n * n, 4, rng);
    return std::make_pair(std::function<Tensor()>([=] {
                            return sum(mul(smp_fast_layer(u, g, p).data, weights));
                          }),
                          params);
  }));

  out.push_back(gradient_check("gradients.smp_default", seed ^ 33, instances, [](Rng& rng) {
    const std::size_t n = uniform_size(rng, 3, 6);
    Graph g = random_graph(n, 0.5, rng);
    random_features(g, 0, 2, rng);
    auto u = random_context(n, c, rng, true);
    auto p = SmpLayerParams::make_default(c, 4, g.edge_feature_dim(), 2, rng);
    ParamList params = collected(p);
    randomize(params, rng);
    params.push_back({"U", u.data});
    const Tensor weights = random_matrix(n * n, 4, rng);
    return std::make_pair(std::function<Tensor()>([=] {
                            return sum(mul(smp_default_layer(u, g, p).data, weights));
                          }),
                          params);
  }));

  out.push_back(gradient_check("gradients.mpnn", seed ^ 34, instances, [](Rng& rng) {
    const std::size_t n = uniform_size(rng, 3, 8);
    Graph g = random_graph(n, 0.5, rng);
    random_features(g, 0, 2, rng);
    const Tensor x = random_matrix(n, c, rng, true);
    auto p = MpnnLayerParams::init(c, 4, g.edge_feature_dim(), 2, rng);
    ParamList params = collected(p);
    randomize(params, rng);
    params.push_back({"X", x});
    const Tensor weights = random_matrix(n, 4, rng);
    return std::make_pair(std::function<Tensor()>([=] {
                            return sum(mul(mpnn_layer(x, g, p), weights));
                          }),
                          params);
  }));

  out.push_back(gradient_check("gradients.node_pool", seed ^ 35, instances, [](Rng& rng) {
    const std::size_t n = uniform_size(rng, 3, 6);
    auto u = random_context(n, c, rng, true);
    auto p = NodePoolParams::init(c, 5, 3, rng);
    ParamList params = collected(p);
    randomize(params, rng);
    params.push_back({"U", u.data});
    const Tensor weights = random_matrix(n, 3, rng);
    return std::make_pair(std::function<Tensor()>([=] {
                            return sum(mul(node_pool(u, p), weights));
                          }),
                          params);
  }));

  out.push_back(gradient_check("gradients.graph_extract", seed ^ 36, instances, [](Rng& rng) {
    const std::size_t n = uniform_size(rng, 3, 6);
    auto u = random_context(n, c, rng, true);
    auto p = MlpParams::init(mlp_dims(2 * c, 5, 1, 3), rng);
    ParamList params = collected(p);
    randomize(params, rng);
    params.push_back({"U", u.data});
    const Tensor weights = random_matrix(1, 3, rng);
    return std::make_pair(std::function<Tensor()>([=] {
                            return sum(mul(graph_extract(u, p), weights));
                          }),
                          params);
  }));

  out.push_back(gradient_check("gradients.fast_network_bce", seed ^ 37, instances, [](Rng& rng) {
    Graph g = random_connected_graph(6, rng);
    ParamList params;
    std::vector<SmpLayerParams> layers;
    std::size_t width = 1;
    for (std::size_t l = 0; l < 3; ++l) {
      layers.push_back(SmpLayerParams::fast(width, 4, rng));
      layers.back().collect("layer" + std::to_string(l), params);
      width = 4;
    }
    auto head = MlpParams::init(mlp_dims(8, 6, 1, 1), rng);
    head.collect("head", params);
    randomize(params, rng, 0.5);
    const double label = static_cast<double>(uniform_size(rng, 0, 1));
    return std::make_pair(std::function<Tensor()>([=] {
                            LocalContext u = init_local_context(g);
                            for (const auto& p : layers) u = smp_fast_layer(u, g, p);
                            return bce_with_logits(graph_extract(u, head),
                                                   std::span<const double>(&label, 1));
                          }),
                          params);
  }));
  (void)probe;
  return out;
}

std::vector<CheckResult> run_verify(const std::string& suite, const VerifyOptions& opts) {
  if (suite != "all" && std::find(kVerifySuites.begin(), kVerifySuites.end(), suite) == kVerifySuites.end()) {
    throw ArgumentError("unknown verify suite '" + suite + "'");
  }
  std::vector<CheckResult> out;
  auto want = [&](const char* name) { return suite == "all" || suite == name; };
  if (want("equivariance")) {
    auto eq = verify_equivariance(opts);
    out.insert(out.end(), eq.begin(), eq.end());
  }
  if (want("oracles")) {
    out.push_back(check_powers_of_adjacency(opts.seed));
    out.push_back(check_receptive_field_random(opts.seed));
    out.push_back(check_receptive_field_exhaustive());
    out.push_back(check_receptive_field_diameter(opts.seed));
    out.push_back(check_trace_triangles(opts.seed));
    out.push_back(check_spectral_radius(opts.seed));
    out.push_back(check_cycle_counts(opts.seed));
    out.push_back(check_coloring_validity(opts.seed));
    out.push_back(check_coloring_reduction(opts.seed));
    out.push_back(check_coloring_monotone(opts.seed));
    out.push_back(check_dataset_labels(opts.seed));
  }
  if (want("separation")) {
    out.push_back(check_separation_trace());
    out.push_back(check_separation_mpnn(opts.seed));
    out.push_back(check_lifting(opts.seed));
  }
  if (want("gradients")) {
    auto gr = verify_gradients(opts.seed);
    out.insert(out.end(), gr.begin(), gr.end());
  }
  return out;
}

}  // namespace smp
