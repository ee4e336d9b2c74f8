#pragma once

#include "smp/graph.hpp"
#include "smp/mlp.hpp"

namespace smp::detail {

struct DirectedEdges {
  std::vector<std::size_t> dst;
  std::vector<std::size_t> src;
  std::vector<std::size_t> edge;  // index into Graph::edges()
};

/// Both orientations of every edge, ordered by (dst, src).
DirectedEdges directed_edges(const Graph& g);

/// sum_{j in N_i} message([h_i | h_j | 1 y_ij^T]) / d_avg for stacked blocks
/// of `block_rows` rows; zero on edgeless graphs.
Tensor aggregate_messages(const Tensor& h, std::size_t block_rows, const Graph& g,
                          const MlpParams& message);

}  // namespace smp::detail
