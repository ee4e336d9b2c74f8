#include "smp/errors.hpp"
#include "smp/layers.hpp"
#include "smp/ops.hpp"

namespace smp {

NodePoolParams NodePoolParams::init(std::size_t c_in, std::size_t width, std::size_t c_node,
                                    Rng& rng) {
  NodePoolParams p;
  p.mlp = MlpParams::init(mlp_dims(c_in, width, 1, width), rng);
  const std::size_t dims[] = {3 * width, c_node};
  p.output = MlpParams::init(dims, rng);
  return p;
}

void NodePoolParams::collect(const std::string& prefix, ParamList& out) const {
  mlp.collect(prefix + ".mlp", out);
  output.collect(prefix + ".out", out);
}

Tensor node_pool(const LocalContext& u, const NodePoolParams& p) {
  const Tensor h = mlp_forward(u.data, p.mlp);
  const auto owners = u.owner_flat();
  const Tensor parts[] = {block_mean(h, u.rows), block_max(h, u.rows), gather_rows(h, owners)};
  return mlp_forward(concat_cols(parts), p.output);
}

Tensor graph_extract(const LocalContext& u, const MlpParams& p) {
  if (u.nodes == 0) throw ContractError("graph_extract on an empty graph");
  const auto owners = u.owner_flat();
  const Tensor diag = gather_rows(u.data, owners);
  const Tensor parts[] = {block_sum(diag, diag.rows()), block_sum(u.data, u.data.rows())};
  return mlp_forward(concat_cols(parts), p);
}

}  // namespace smp
