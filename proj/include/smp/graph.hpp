#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace smp {

/// Small dense row-major matrix for non-differentiable data (adjacency,
/// distances, feature tables).
template <typename T>
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<T> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, T fill = T{}) : rows(r), cols(c), data(r * c, fill) {}

  T& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
  std::span<const T> row(std::size_t i) const { return {data.data() + i * cols, cols}; }

  bool operator==(const Matrix&) const = default;
};

using RealMatrix = Matrix<double>;
using IntMatrix = Matrix<std::int64_t>;

struct Edge {
  std::size_t u;  // u < v
  std::size_t v;
  auto operator<=>(const Edge&) const = default;
};

/// Simple undirected graph with optional node features X (n x c_X) and
/// optional edge features (one c_Y vector per edge, aligned with edges()).
/// Edges are stored with u < v, sorted and deduplicated; self-loops and
/// out-of-range endpoints are rejected.
class Graph {
 public:
  Graph() = default;
  explicit Graph(std::size_t n, std::span<const std::pair<std::size_t, std::size_t>> edges = {});
  Graph(std::size_t n, std::initializer_list<std::pair<std::size_t, std::size_t>> edges);

  std::size_t n() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t num_edges() const { return edges_.size(); }
  /// Sorted adjacency lists.
  const std::vector<std::vector<std::size_t>>& neighbors() const { return adjacency_; }
  std::size_t degree(std::size_t i) const { return adjacency_[i].size(); }
  std::size_t max_degree() const;
  /// 2|E| / n, 0 for the empty graph.
  double average_degree() const;
  bool has_edge(std::size_t i, std::size_t j) const;
  std::optional<std::size_t> edge_index(std::size_t i, std::size_t j) const;
  IntMatrix adjacency_matrix() const;

  bool has_node_features() const { return node_feature_dim_ > 0; }
  std::size_t node_feature_dim() const { return node_feature_dim_; }
  /// Row-major n x c_X table.
  const std::vector<double>& node_features() const { return node_features_; }
  std::span<const double> node_feature(std::size_t i) const;
  void set_node_features(std::size_t dim, std::vector<double> values);
  void clear_node_features();

  bool has_edge_features() const { return edge_feature_dim_ > 0; }
  std::size_t edge_feature_dim() const { return edge_feature_dim_; }
  /// Row-major |E| x c_Y table, rows aligned with edges().
  const std::vector<double>& edge_features() const { return edge_features_; }
  std::span<const double> edge_feature(std::size_t edge) const;
  void set_edge_features(std::size_t dim, std::vector<double> values);

  bool operator==(const Graph& other) const;

 private:
  void build(std::span<const std::pair<std::size_t, std::size_t>> edges);

  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::size_t>> adjacency_;
  std::size_t node_feature_dim_ = 0;
  std::vector<double> node_features_;
  std::size_t edge_feature_dim_ = 0;
  std::vector<double> edge_features_;
};

/// Disjoint union; nodes of `b` are shifted by a.n().
Graph disjoint_union(const Graph& a, const Graph& b);
Graph cycle_graph(std::size_t n);
Graph path_graph(std::size_t n);
Graph complete_graph(std::size_t n);
Graph star_graph(std::size_t leaves);

}  // namespace smp
