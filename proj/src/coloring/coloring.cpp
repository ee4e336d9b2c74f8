#include "smp/coloring.hpp"

#include <algorithm>

#include "smp/errors.hpp"
#include "smp/graph_algorithms.hpp"

namespace smp {

ColorAssignment color_nodes(const Graph& g, std::size_t horizon) {
  if (horizon < 1) throw ArgumentError("coloring horizon L must be >= 1");
  const std::size_t n = g.n();
  const auto dist = all_pairs_shortest_paths(g);
  ColorAssignment ca;
  ca.horizon = horizon;
  ca.colors.assign(n, 0);
  std::vector<char> taken;
  for (std::size_t i = 0; i < n; ++i) {
    taken.assign(n + 1, 0);
    for (std::size_t j = 0; j < i; ++j) {
      if (dist(i, j) <= 2 * horizon) taken[ca.colors[j]] = 1;
    }
    std::size_t c = 0;
    while (taken[c]) ++c;
    ca.colors[i] = c;
    ca.chi = std::max(ca.chi, c + 1);
  }
  return ca;
}

bool is_valid_coloring(const Graph& g, const ColorAssignment& ca) {
  const std::size_t n = g.n();
  if (ca.colors.size() != n || ca.horizon < 1) return false;
  std::size_t used = 0;
  for (auto c : ca.colors) used = std::max(used, c + 1);
  if (used != ca.chi || ca.chi > n) return false;
  const auto dist = all_pairs_shortest_paths(g);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (dist(i, j) <= 2 * ca.horizon && ca.colors[i] == ca.colors[j]) return false;
    }
  }
  return true;
}

LocalContext init_colored_context(const Graph& g, const ColorAssignment& ca) {
  if (!is_valid_coloring(g, ca)) throw ContractError("invalid color assignment for this graph");
  const std::size_t n = g.n();
  const std::size_t r = ca.chi;
  const std::size_t c = 1 + g.node_feature_dim();
  std::vector<double> values(n * r * c, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double* row = values.data() + (i * r + ca.colors[i]) * c;
    row[0] = 1.0;
    if (g.has_node_features()) {
      auto x = g.node_feature(i);
      std::copy(x.begin(), x.end(), row + 1);
    }
  }
  LocalContext u;
  u.data = Tensor({n * r, c}, std::move(values));
  u.nodes = n;
  u.rows = r;
  u.owner_rows = ca.colors;
  u.rows_are_nodes = false;
  return u;
}

}  // namespace smp
