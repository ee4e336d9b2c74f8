#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "smp/context.hpp"
#include "smp/graph.hpp"
#include "smp/mlp.hpp"
#include "smp/params.hpp"

namespace smp {

/// U W1 + (1/n) 1 1^T U W2 + 1 c^T + (1/n) 1_i 1^T U W3, applied to every
/// local context, with n the number of rows per context.
struct EquivLinearParams {
  Tensor w1, w2, w3;  // c_in x c_out
  Tensor bias;        // c_out

  static EquivLinearParams init(std::size_t c_in, std::size_t c_out, Rng& rng);
  std::size_t input_dim() const { return w1.rows(); }
  std::size_t output_dim() const { return w1.cols(); }
  void collect(const std::string& prefix, ParamList& out) const;
};

struct FastParams {
  Tensor w4, w5;  // c x c
};

struct DefaultParams {
  MlpParams message;  // [U_i | U_j | y_ij] -> message
  MlpParams update;   // [U_i | aggregate] -> output
};

struct SmpLayerParams {
  EquivLinearParams equiv;
  std::variant<FastParams, DefaultParams> kind;

  static SmpLayerParams fast(std::size_t c_in, std::size_t c_out, Rng& rng);
  static SmpLayerParams make_default(std::size_t c_in, std::size_t c_out, std::size_t c_edge,
                                     std::size_t hidden_layers, Rng& rng);
  bool is_fast() const { return std::holds_alternative<FastParams>(kind); }
  std::size_t input_dim() const { return equiv.input_dim(); }
  std::size_t output_dim() const;
  void collect(const std::string& prefix, ParamList& out) const;
};

struct MpnnLayerParams {
  MlpParams message;  // [x_i | x_j | y_ij] -> message
  MlpParams update;   // [x_i | aggregate] -> output

  static MpnnLayerParams init(std::size_t c_in, std::size_t c_out, std::size_t c_edge,
                              std::size_t hidden_layers, Rng& rng);
  std::size_t input_dim() const { return update.input_dim() - message.output_dim(); }
  std::size_t output_dim() const { return update.output_dim(); }
  void collect(const std::string& prefix, ParamList& out) const;
};

LocalContext equivariant_linear(const LocalContext& u, const EquivLinearParams& p);

/// Û + (1/d_avg) (sum_j Û_j + (Û W4) ⊙ sum_j Û_j W5), one aggregation per node.
LocalContext smp_fast_layer(const LocalContext& u, const Graph& g, const SmpLayerParams& p);
/// Same layer computed message by message over directed edges; kept as a
/// second code path for cross-checking.
LocalContext smp_fast_layer_per_edge(const LocalContext& u, const Graph& g,
                                     const SmpLayerParams& p);
LocalContext smp_default_layer(const LocalContext& u, const Graph& g, const SmpLayerParams& p);
/// Dispatches on the parameter variant.
LocalContext smp_layer(const LocalContext& u, const Graph& g, const SmpLayerParams& p);

/// x_i' = update([x_i | sum_j message([x_i | x_j | y_ij]) / d_avg]).
Tensor mpnn_layer(const Tensor& x, const Graph& g, const MpnnLayerParams& p);

/// One-hot start, then U_i <- sum over neighbours of U_j, l times. The
/// stacked result is A^l.
LocalContext sum_propagation_power(const Graph& g, std::size_t l);

struct NodePoolParams {
  MlpParams mlp;     // row-wise, c -> h
  MlpParams output;  // single linear layer, 3h -> c_node

  static NodePoolParams init(std::size_t c_in, std::size_t width, std::size_t c_node, Rng& rng);
  void collect(const std::string& prefix, ParamList& out) const;
};

/// Per node: h = mlp(U_i); [mean rows | max rows | h[owner]] -> linear.
Tensor node_pool(const LocalContext& u, const NodePoolParams& p);
/// [sum of owner rows | sum of all rows] -> mlp; a 1 x c_glob row.
Tensor graph_extract(const LocalContext& u, const MlpParams& p);

/// Default-SMP layers that run the given MPNN on the owner rows of one-hot
/// contexts over n-node graphs. Output channel 0 marks the owner row and
/// channels 1.. carry the MPNN state there, zeros elsewhere. `gate` must
/// exceed every |pre-activation| the MPNN update output produces.
std::vector<SmpLayerParams> lift_mpnn_to_smp(std::span<const MpnnLayerParams> mpnn,
                                             std::size_t n, double gate = 1e5);
/// The MPNN state held on the owner rows after `layers` lifted layers.
Tensor lifted_states(const LocalContext& u, std::size_t layers);

}  // namespace smp
