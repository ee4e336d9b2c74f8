#include "smp/graph.hpp"

#include <algorithm>

#include "smp/errors.hpp"

namespace smp {

Graph::Graph(std::size_t n, std::span<const std::pair<std::size_t, std::size_t>> edges)
    : n_(n) {
  build(edges);
}

Graph::Graph(std::size_t n, std::initializer_list<std::pair<std::size_t, std::size_t>> edges)
    : n_(n) {
  build(std::span<const std::pair<std::size_t, std::size_t>>(edges.begin(), edges.size()));
}

void Graph::build(std::span<const std::pair<std::size_t, std::size_t>> edges) {
  edges_.clear();
  edges_.reserve(edges.size());
  for (auto [a, b] : edges) {
    if (a >= n_ || b >= n_) {
      throw ArgumentError("edge (" + std::to_string(a) + "," + std::to_string(b) +
                          ") out of range for n=" + std::to_string(n_));
    }
    if (a == b) throw ArgumentError("self-loop at node " + std::to_string(a));
    edges_.push_back({std::min(a, b), std::max(a, b)});
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
  adjacency_.assign(n_, {});
  for (const auto& e : edges_) {
    adjacency_[e.u].push_back(e.v);
    adjacency_[e.v].push_back(e.u);
  }
  for (auto& list : adjacency_) std::sort(list.begin(), list.end());
}

std::size_t Graph::max_degree() const {
  std::size_t d = 0;
  for (const auto& list : adjacency_) d = std::max(d, list.size());
  return d;
}

double Graph::average_degree() const {
  if (n_ == 0) return 0.0;
  return 2.0 * static_cast<double>(edges_.size()) / static_cast<double>(n_);
}

bool Graph::has_edge(std::size_t i, std::size_t j) const {
  if (i >= n_ || j >= n_) return false;
  return std::binary_search(adjacency_[i].begin(), adjacency_[i].end(), j);
}

std::optional<std::size_t> Graph::edge_index(std::size_t i, std::size_t j) const {
  Edge key{std::min(i, j), std::max(i, j)};
  auto it = std::lower_bound(edges_.begin(), edges_.end(), key);
  if (it == edges_.end() || *it != key) return std::nullopt;
  return static_cast<std::size_t>(it - edges_.begin());
}

IntMatrix Graph::adjacency_matrix() const {
  IntMatrix a(n_, n_, 0);
  for (const auto& e : edges_) {
    a(e.u, e.v) = 1;
    a(e.v, e.u) = 1;
  }
  return a;
}

std::span<const double> Graph::node_feature(std::size_t i) const {
  return {node_features_.data() + i * node_feature_dim_, node_feature_dim_};
}

void Graph::set_node_features(std::size_t dim, std::vector<double> values) {
  if (values.size() != dim * n_) {
    throw DimensionError("node features: expected " + std::to_string(n_) + "x" +
                         std::to_string(dim) + " values, got " + std::to_string(values.size()));
  }
  node_feature_dim_ = dim;
  node_features_ = std::move(values);
}

void Graph::clear_node_features() {
  node_feature_dim_ = 0;
  node_features_.clear();
}

std::span<const double> Graph::edge_feature(std::size_t edge) const {
  return {edge_features_.data() + edge * edge_feature_dim_, edge_feature_dim_};
}

void Graph::set_edge_features(std::size_t dim, std::vector<double> values) {
  if (values.size() != dim * edges_.size()) {
    throw DimensionError("edge features: expected " + std::to_string(edges_.size()) + "x" +
                         std::to_string(dim) + " values, got " + std::to_string(values.size()));
  }
  edge_feature_dim_ = dim;
  edge_features_ = std::move(values);
}

bool Graph::operator==(const Graph& other) const {
  return n_ == other.n_ && edges_ == other.edges_ &&
         node_feature_dim_ == other.node_feature_dim_ &&
         node_features_ == other.node_features_ &&
         edge_feature_dim_ == other.edge_feature_dim_ &&
         edge_features_ == other.edge_features_;
}

Graph disjoint_union(const Graph& a, const Graph& b) {
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (const auto& e : a.edges()) edges.emplace_back(e.u, e.v);
  for (const auto& e : b.edges()) edges.emplace_back(e.u + a.n(), e.v + a.n());
  return Graph(a.n() + b.n(), edges);
}

Graph cycle_graph(std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
  return Graph(n, edges);
}

Graph path_graph(std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
  return Graph(n, edges);
}

Graph complete_graph(std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) edges.emplace_back(i, j);
  }
  return Graph(n, edges);
}

Graph star_graph(std::size_t leaves) {
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t i = 1; i <= leaves; ++i) edges.emplace_back(0, i);
  return Graph(leaves + 1, edges);
}

}  // namespace smp
