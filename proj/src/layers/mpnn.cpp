#include "message_passing.hpp"
#include "smp/errors.hpp"
#include "smp/layers.hpp"
#include "smp/ops.hpp"

namespace smp {

MpnnLayerParams MpnnLayerParams::init(std::size_t c_in, std::size_t c_out, std::size_t c_edge,
                                      std::size_t hidden_layers, Rng& rng) {
  MpnnLayerParams p;
  p.message = MlpParams::init(mlp_dims(2 * c_in + c_edge, c_out, hidden_layers, c_out), rng);
  p.update = MlpParams::init(mlp_dims(c_in + c_out, c_out, hidden_layers, c_out), rng);
  return p;
}

void MpnnLayerParams::collect(const std::string& prefix, ParamList& out) const {
  message.collect(prefix + ".message", out);
  update.collect(prefix + ".update", out);
}

Tensor mpnn_layer(const Tensor& x, const Graph& g, const MpnnLayerParams& p) {
  if (x.rows() != g.n()) {
    throw DimensionError("mpnn_layer: " + shape_string(x.shape()) + " states for a graph with " +
                         std::to_string(g.n()) + " nodes");
  }
  const Tensor agg = detail::aggregate_messages(x, 1, g, p.message);
  const Tensor parts[] = {x, agg};
  return mlp_forward(concat_cols(parts), p.update);
}

}  // namespace smp
