#include <algorithm>
#include <deque>

#include "smp/errors.hpp"
#include "smp/graph_algorithms.hpp"

namespace smp {

std::vector<std::size_t> bfs_distances(const Graph& g, std::size_t source) {
  const std::size_t n = g.n();
  if (source >= n) throw ArgumentError("BFS source out of range");
  std::vector<std::size_t> dist(n, n);
  std::deque<std::size_t> queue{source};
  dist[source] = 0;
  while (!queue.empty()) {
    const auto u = queue.front();
    queue.pop_front();
    for (auto v : g.neighbors()[u]) {
      if (dist[v] == n) {
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
    }
  }
  return dist;
}

DistanceMatrix all_pairs_shortest_paths(const Graph& g) {
  const std::size_t n = g.n();
  DistanceMatrix d(n, n, n);
  for (std::size_t i = 0; i < n; ++i) {
    auto row = bfs_distances(g, i);
    std::copy(row.begin(), row.end(), d.data.begin() + i * n);
  }
  return d;
}

bool is_connected(const Graph& g) {
  if (g.n() <= 1) return true;
  auto d = bfs_distances(g, 0);
  return std::none_of(d.begin(), d.end(), [&](std::size_t v) { return v == g.n(); });
}

MultitaskTargets multitask_targets(const Graph& g, std::size_t source,
                                   std::span<const double> x) {
  const std::size_t n = g.n();
  if (source >= n) throw ArgumentError("multitask source out of range");
  if (x.size() != n) throw DimensionError("multitask signal must have one entry per node");

  MultitaskTargets t;
  const auto apsp = all_pairs_shortest_paths(g);
  t.dist.resize(n);
  t.ecc.resize(n);
  t.lap.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    t.dist[i] = static_cast<double>(apsp(source, i));
    std::size_t ecc = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (apsp(i, j) < n) ecc = std::max(ecc, apsp(i, j));
    }
    t.ecc[i] = static_cast<double>(ecc);
    double acc = static_cast<double>(g.degree(i)) * x[i];
    for (auto j : g.neighbors()[i]) acc -= x[j];
    t.lap[i] = acc;
  }
  t.connected = true;
  double diameter = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (apsp(source, i) == n) {
      t.connected = false;
    } else {
      diameter = std::max(diameter, t.ecc[i]);
    }
  }
  t.diameter = diameter;
  t.radius = spectral_radius(g);
  return t;
}

}  // namespace smp
