#include <algorithm>

#include "smp/errors.hpp"
#include "smp/graph_algorithms.hpp"

namespace smp {

IntMatrix receptive_field(const Graph& g, std::size_t node, std::size_t l) {
  if (l < 1) throw ArgumentError("receptive field needs l >= 1");
  const auto d = bfs_distances(g, node);
  IntMatrix out(g.n(), g.n(), 0);
  for (const auto& e : g.edges()) {
    const auto dp = d[e.u];
    const auto dq = d[e.v];
    // Unreachable nodes carry the sentinel n, which can be <= l on small graphs.
    if (dp == g.n() || dq == g.n()) continue;
    if (dp <= l && dq <= l && dp + dq < 2 * l) {
      out(e.u, e.v) = 1;
      out(e.v, e.u) = 1;
    }
  }
  return out;
}

std::vector<IntMatrix> receptive_field_recursion(const Graph& g, std::size_t l) {
  if (l < 1) throw ArgumentError("receptive field recursion needs l >= 1");
  const std::size_t n = g.n();
  std::vector<IntMatrix> u(n, IntMatrix(n, n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (auto j : g.neighbors()[i]) {
      u[i](i, j) = 1;
      u[i](j, i) = 1;
    }
  }
  for (std::size_t step = 1; step < l; ++step) {
    std::vector<IntMatrix> next = u;
    for (std::size_t i = 0; i < n; ++i) {
      for (auto j : g.neighbors()[i]) {
        for (std::size_t t = 0; t < n * n; ++t) {
          next[i].data[t] = std::max(next[i].data[t], u[j].data[t]);
        }
      }
    }
    u = std::move(next);
  }
  return u;
}

}  // namespace smp
