#include "smp/errors.hpp"
#include "smp/layers.hpp"
#include "smp/ops.hpp"

namespace smp {

EquivLinearParams EquivLinearParams::init(std::size_t c_in, std::size_t c_out, Rng& rng) {
  EquivLinearParams p;
  p.w1 = glorot_uniform(c_in, c_out, rng);
  p.w2 = glorot_uniform(c_in, c_out, rng);
  p.w3 = glorot_uniform(c_in, c_out, rng);
  p.bias = zero_bias(c_out);
  return p;
}

void EquivLinearParams::collect(const std::string& prefix, ParamList& out) const {
  out.push_back({prefix + ".W1", w1});
  out.push_back({prefix + ".W2", w2});
  out.push_back({prefix + ".W3", w3});
  out.push_back({prefix + ".c", bias});
}

LocalContext equivariant_linear(const LocalContext& u, const EquivLinearParams& p) {
  if (u.channels() != p.input_dim()) {
    throw DimensionError("equivariant linear: context has " + std::to_string(u.channels()) +
                         " channels, weights expect " + shape_string(p.w1.shape()));
  }
  const auto owners = u.owner_flat();
  // Column means of every context, one row per node.
  const Tensor means = block_mean(u.data, u.rows);
  Tensor out = matmul(u.data, p.w1);
  out = add(out, repeat_rows(matmul(means, p.w2), u.rows));
  out = add(out, scatter_add_rows(matmul(means, p.w3), owners, out.rows()));
  out = add_bias(out, p.bias);
  return u.with_data(std::move(out));
}

}  // namespace smp
