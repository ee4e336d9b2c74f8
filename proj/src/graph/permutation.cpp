#include "smp/permutation.hpp"

#include <algorithm>
#include <numeric>

#include "smp/errors.hpp"

namespace smp {

Permutation::Permutation(std::vector<std::size_t> mapping) : mapping_(std::move(mapping)) {
  std::vector<bool> hit(mapping_.size(), false);
  for (auto v : mapping_) {
    if (v >= mapping_.size() || hit[v]) {
      throw ContractError("permutation mapping is not a bijection on [0, " +
                          std::to_string(mapping_.size()) + ")");
    }
    hit[v] = true;
  }
}

Permutation Permutation::identity(std::size_t n) {
  std::vector<std::size_t> m(n);
  std::iota(m.begin(), m.end(), 0);
  return Permutation(std::move(m));
}

Permutation Permutation::random(std::size_t n, Rng& rng) {
  std::vector<std::size_t> m(n);
  std::iota(m.begin(), m.end(), 0);
  std::shuffle(m.begin(), m.end(), rng);
  return Permutation(std::move(m));
}

Permutation Permutation::inverse() const {
  std::vector<std::size_t> inv(mapping_.size());
  for (std::size_t i = 0; i < mapping_.size(); ++i) inv[mapping_[i]] = i;
  return Permutation(std::move(inv));
}

Permutation compose(const Permutation& outer, const Permutation& inner) {
  if (outer.size() != inner.size()) {
    throw DimensionError("composing permutations of sizes " + std::to_string(outer.size()) +
                         " and " + std::to_string(inner.size()));
  }
  std::vector<std::size_t> m(inner.size());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = outer(inner(i));
  return Permutation(std::move(m));
}

RealMatrix permute_node_rows(const Permutation& pi, const RealMatrix& x) {
  if (x.rows != pi.size()) {
    throw DimensionError("permutation of size " + std::to_string(pi.size()) + " applied to " +
                         std::to_string(x.rows) + "-row matrix");
  }
  RealMatrix out(x.rows, x.cols);
  for (std::size_t i = 0; i < x.rows; ++i) {
    std::copy(x.row(i).begin(), x.row(i).end(), out.data.begin() + pi(i) * x.cols);
  }
  return out;
}

std::vector<double> permute_pair_tensor(const Permutation& pi, std::span<const double> values,
                                        std::size_t channels) {
  const std::size_t n = pi.size();
  if (values.size() != n * n * channels) {
    throw DimensionError("permutation of size " + std::to_string(n) + " applied to tensor with " +
                         std::to_string(values.size()) + " entries and " +
                         std::to_string(channels) + " channels");
  }
  std::vector<double> out(values.size());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      std::copy_n(values.data() + (i * n + j) * channels, channels,
                  out.data() + (pi(i) * n + pi(j)) * channels);
    }
  }
  return out;
}

Graph permute_graph(const Permutation& pi, const Graph& g) {
  if (g.n() != pi.size()) {
    throw DimensionError("permutation of size " + std::to_string(pi.size()) +
                         " applied to graph with " + std::to_string(g.n()) + " nodes");
  }
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  edges.reserve(g.num_edges());
  for (const auto& e : g.edges()) edges.emplace_back(pi(e.u), pi(e.v));
  Graph out(g.n(), edges);
  if (g.has_node_features()) {
    const std::size_t c = g.node_feature_dim();
    std::vector<double> x(g.n() * c);
    for (std::size_t i = 0; i < g.n(); ++i) {
      auto row = g.node_feature(i);
      std::copy(row.begin(), row.end(), x.begin() + pi(i) * c);
    }
    out.set_node_features(c, std::move(x));
  }
  if (g.has_edge_features()) {
    const std::size_t c = g.edge_feature_dim();
    std::vector<double> y(g.num_edges() * c);
    for (std::size_t k = 0; k < g.num_edges(); ++k) {
      const auto& e = g.edges()[k];
      const std::size_t dst = *out.edge_index(pi(e.u), pi(e.v));
      auto row = g.edge_feature(k);
      std::copy(row.begin(), row.end(), y.begin() + dst * c);
    }
    out.set_edge_features(c, std::move(y));
  }
  return out;
}

}  // namespace smp
