#include "smp/context.hpp"

#include <algorithm>

#include "smp/errors.hpp"

namespace smp {

std::vector<std::size_t> LocalContext::owner_flat() const {
  std::vector<std::size_t> out(nodes);
  for (std::size_t i = 0; i < nodes; ++i) out[i] = i * rows + owner_rows[i];
  return out;
}

double LocalContext::at(std::size_t node, std::size_t row, std::size_t channel) const {
  return data.at(node * rows + row, channel);
}

LocalContext LocalContext::with_data(Tensor new_data) const {
  if (new_data.rows() != nodes * rows) {
    throw DimensionError("context data has " + std::to_string(new_data.rows()) +
                         " rows, layout needs " + std::to_string(nodes * rows));
  }
  LocalContext out = *this;
  out.data = std::move(new_data);
  return out;
}

LocalContext init_local_context(const Graph& g) {
  const std::size_t n = g.n();
  const std::size_t c = 1 + g.node_feature_dim();
  std::vector<double> values(n * n * c, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double* row = values.data() + (i * n + i) * c;
    row[0] = 1.0;
    if (g.has_node_features()) {
      auto x = g.node_feature(i);
      std::copy(x.begin(), x.end(), row + 1);
    }
  }
  LocalContext u;
  u.data = Tensor({n * n, c}, std::move(values));
  u.nodes = n;
  u.rows = n;
  u.owner_rows.resize(n);
  for (std::size_t i = 0; i < n; ++i) u.owner_rows[i] = i;
  u.rows_are_nodes = true;
  return u;
}

LocalContext node_vectors(Tensor x) {
  LocalContext u;
  u.nodes = x.rows();
  u.rows = 1;
  u.owner_rows.assign(u.nodes, 0);
  u.data = std::move(x);
  return u;
}

Tensor init_node_states(const Graph& g) {
  const std::size_t n = g.n();
  const std::size_t c = 1 + g.node_feature_dim();
  std::vector<double> values(n * c, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    values[i * c] = 1.0;
    if (g.has_node_features()) {
      auto x = g.node_feature(i);
      std::copy(x.begin(), x.end(), values.begin() + i * c + 1);
    }
  }
  return Tensor({n, c}, std::move(values));
}

LocalContext permute_context(const Permutation& pi, const LocalContext& u) {
  if (pi.size() != u.nodes) {
    throw DimensionError("permutation of size " + std::to_string(pi.size()) +
                         " applied to context over " + std::to_string(u.nodes) + " nodes");
  }
  const std::size_t c = u.channels();
  const std::size_t r = u.rows;
  auto src = u.data.values();
  std::vector<double> out(src.size());
  LocalContext result = u;
  for (std::size_t i = 0; i < u.nodes; ++i) {
    for (std::size_t j = 0; j < r; ++j) {
      const std::size_t dst_row = u.rows_are_nodes ? pi(j) : j;
      std::copy_n(src.data() + (i * r + j) * c, c, out.data() + (pi(i) * r + dst_row) * c);
    }
    result.owner_rows[pi(i)] = u.rows_are_nodes ? pi(u.owner_rows[i]) : u.owner_rows[i];
  }
  result.data = Tensor(u.data.shape(), std::move(out));
  return result;
}

std::vector<double> context_tensor(const LocalContext& u) {
  if (!u.rows_are_nodes) throw ContractError("context rows do not index nodes");
  auto v = u.data.values();
  return {v.begin(), v.end()};
}

}  // namespace smp
