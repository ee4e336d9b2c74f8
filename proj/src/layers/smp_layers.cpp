#include <algorithm>

#include "message_passing.hpp"
#include "smp/errors.hpp"
#include "smp/layers.hpp"
#include "smp/ops.hpp"

namespace smp {

namespace detail {

DirectedEdges directed_edges(const Graph& g) {
  DirectedEdges d;
  d.dst.reserve(2 * g.num_edges());
  d.src.reserve(2 * g.num_edges());
  d.edge.reserve(2 * g.num_edges());
  for (std::size_t i = 0; i < g.n(); ++i) {
    for (auto j : g.neighbors()[i]) {
      d.dst.push_back(i);
      d.src.push_back(j);
      d.edge.push_back(*g.edge_index(i, j));
    }
  }
  return d;
}

Tensor aggregate_messages(const Tensor& h, std::size_t block_rows, const Graph& g,
                          const MlpParams& message) {
  const std::size_t n = g.n();
  if (g.num_edges() == 0) return Tensor::zeros({n * block_rows, message.output_dim()});
  const auto d = directed_edges(g);
  std::vector<Tensor> parts{gather_blocks(h, block_rows, d.dst),
                            gather_blocks(h, block_rows, d.src)};
  if (g.has_edge_features()) {
    const std::size_t cy = g.edge_feature_dim();
    std::vector<double> y(d.dst.size() * block_rows * cy);
    auto out = y.begin();
    for (auto k : d.edge) {
      auto row = g.edge_feature(k);
      for (std::size_t r = 0; r < block_rows; ++r) out = std::copy(row.begin(), row.end(), out);
    }
    parts.emplace_back(Shape{d.dst.size() * block_rows, cy}, std::move(y));
  }
  const Tensor messages = mlp_forward(concat_cols(parts), message);
  return scale(scatter_add_blocks(messages, block_rows, d.dst, n), 1.0 / g.average_degree());
}

}  // namespace detail

SmpLayerParams SmpLayerParams::fast(std::size_t c_in, std::size_t c_out, Rng& rng) {
  SmpLayerParams p;
  p.equiv = EquivLinearParams::init(c_in, c_out, rng);
  FastParams f;
  f.w4 = glorot_uniform(c_out, c_out, rng);
  f.w5 = glorot_uniform(c_out, c_out, rng);
  p.kind = std::move(f);
  return p;
}

SmpLayerParams SmpLayerParams::make_default(std::size_t c_in, std::size_t c_out,
                                            std::size_t c_edge, std::size_t hidden_layers,
                                            Rng& rng) {
  SmpLayerParams p;
  p.equiv = EquivLinearParams::init(c_in, c_out, rng);
  DefaultParams d;
  d.message = MlpParams::init(mlp_dims(2 * c_out + c_edge, c_out, hidden_layers, c_out), rng);
  d.update = MlpParams::init(mlp_dims(2 * c_out, c_out, hidden_layers, c_out), rng);
  p.kind = std::move(d);
  return p;
}

std::size_t SmpLayerParams::output_dim() const {
  if (is_fast()) return equiv.output_dim();
  return std::get<DefaultParams>(kind).update.output_dim();
}

void SmpLayerParams::collect(const std::string& prefix, ParamList& out) const {
  equiv.collect(prefix + ".equiv", out);
  if (is_fast()) {
    const auto& f = std::get<FastParams>(kind);
    out.push_back({prefix + ".W4", f.w4});
    out.push_back({prefix + ".W5", f.w5});
  } else {
    const auto& d = std::get<DefaultParams>(kind);
    d.message.collect(prefix + ".message", out);
    d.update.collect(prefix + ".update", out);
  }
}

LocalContext smp_fast_layer(const LocalContext& u, const Graph& g, const SmpLayerParams& p) {
  if (!p.is_fast()) throw ContractError("smp_fast_layer needs Fast parameters");
  if (g.n() != u.nodes) throw DimensionError("context and graph disagree on the node count");
  const auto& f = std::get<FastParams>(p.kind);
  LocalContext hat = equivariant_linear(u, p.equiv);
  if (g.num_edges() == 0) return hat;
  const Tensor& h = hat.data;
  const Tensor summed = neighbor_sum_blocks(h, u.rows, g.neighbors());
  const Tensor gated = neighbor_sum_blocks(matmul(h, f.w5), u.rows, g.neighbors());
  const Tensor message = add(summed, mul(matmul(h, f.w4), gated));
  return hat.with_data(add(h, scale(message, 1.0 / g.average_degree())));
}

LocalContext smp_fast_layer_per_edge(const LocalContext& u, const Graph& g,
                                     const SmpLayerParams& p) {
  if (!p.is_fast()) throw ContractError("smp_fast_layer_per_edge needs Fast parameters");
  if (g.n() != u.nodes) throw DimensionError("context and graph disagree on the node count");
  const auto& f = std::get<FastParams>(p.kind);
  LocalContext hat = equivariant_linear(u, p.equiv);
  if (g.num_edges() == 0) return hat;
  const auto d = detail::directed_edges(g);
  const Tensor hi = gather_blocks(hat.data, u.rows, d.dst);
  const Tensor hj = gather_blocks(hat.data, u.rows, d.src);
  const Tensor messages = add(hj, mul(matmul(hi, f.w4), matmul(hj, f.w5)));
  const Tensor agg = scatter_add_blocks(messages, u.rows, d.dst, u.nodes);
  return hat.with_data(add(hat.data, scale(agg, 1.0 / g.average_degree())));
}

LocalContext smp_default_layer(const LocalContext& u, const Graph& g, const SmpLayerParams& p) {
  if (p.is_fast()) throw ContractError("smp_default_layer needs Default parameters");
  if (g.n() != u.nodes) throw DimensionError("context and graph disagree on the node count");
  const auto& d = std::get<DefaultParams>(p.kind);
  LocalContext hat = equivariant_linear(u, p.equiv);
  const Tensor agg = detail::aggregate_messages(hat.data, u.rows, g, d.message);
  const Tensor parts[] = {hat.data, agg};
  return hat.with_data(mlp_forward(concat_cols(parts), d.update));
}

LocalContext smp_layer(const LocalContext& u, const Graph& g, const SmpLayerParams& p) {
  return p.is_fast() ? smp_fast_layer(u, g, p) : smp_default_layer(u, g, p);
}

LocalContext sum_propagation_power(const Graph& g, std::size_t l) {
  if (l < 1) throw ArgumentError("sum_propagation_power needs l >= 1");
  const std::size_t n = g.n();
  LocalContext u;
  u.nodes = n;
  u.rows = n;
  u.rows_are_nodes = true;
  u.owner_rows.resize(n);
  std::vector<double> eye(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    u.owner_rows[i] = i;
    eye[i * n + i] = 1.0;
  }
  Tensor data({n * n, 1}, std::move(eye));
  for (std::size_t step = 0; step < l; ++step) data = neighbor_sum_blocks(data, n, g.neighbors());
  u.data = std::move(data);
  return u;
}

}  // namespace smp
