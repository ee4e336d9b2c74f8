#pragma once

#include <cstddef>
#include <vector>

#include "smp/graph.hpp"
#include "smp/permutation.hpp"
#include "smp/tensor.hpp"

namespace smp {

/// Stack of per-node local contexts stored as one (nodes * rows) x channels
/// matrix: block i holds U_i. `owner_rows[i]` is the row of block i that
/// represents node i itself (i for one-hot contexts, colors[i] for colored
/// ones, 0 for plain node vectors).
struct LocalContext {
  Tensor data;
  std::size_t nodes = 0;
  std::size_t rows = 0;
  std::vector<std::size_t> owner_rows;
  // True when row j of every block stands for node j, so a relabeling of the
  // graph acts on rows as well as on blocks.
  bool rows_are_nodes = false;

  std::size_t channels() const { return data.cols(); }
  /// Flat row index of every owner row, one per node.
  std::vector<std::size_t> owner_flat() const;
  double at(std::size_t node, std::size_t row, std::size_t channel) const;
  /// Same layout, different values.
  LocalContext with_data(Tensor new_data) const;
};

/// U_i[i,:] = [1, x_i], everything else 0.
LocalContext init_local_context(const Graph& g);
/// Node feature vectors viewed as contexts with a single row per node.
LocalContext node_vectors(Tensor x);
/// [1, x_i] per node, the vector analogue of init_local_context.
Tensor init_node_states(const Graph& g);

/// Blocks move to pi(i); rows move too when they index nodes.
LocalContext permute_context(const Permutation& pi, const LocalContext& u);
/// n x n x c view of a one-hot layout as a flat (i, j, k) array.
std::vector<double> context_tensor(const LocalContext& u);

}  // namespace smp
