#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "smp/params.hpp"
#include "smp/tensor.hpp"

namespace smp {

/// Fully connected stack applied row-wise. Hidden layers use ReLU, the last
/// layer is linear.
struct MlpParams {
  std::vector<Tensor> weights;  // [d_in x d_out] per layer
  std::vector<Tensor> biases;   // [d_out] per layer

  /// dims = {d_in, h_1, ..., d_out}; at least two entries.
  static MlpParams init(std::span<const std::size_t> dims, Rng& rng);
  /// Validates that consecutive layers chain and all entries are finite.
  static MlpParams from_layers(std::vector<Tensor> weights, std::vector<Tensor> biases);

  std::size_t depth() const { return weights.size(); }
  std::size_t input_dim() const;
  std::size_t output_dim() const;
  void collect(const std::string& prefix, ParamList& out) const;
};

/// out = act(x W + 1 b^T), chained over layers.
Tensor mlp_forward(const Tensor& x, const MlpParams& p);

/// {d_in, width x hidden_layers..., d_out}
std::vector<std::size_t> mlp_dims(std::size_t d_in, std::size_t width,
                                  std::size_t hidden_layers, std::size_t d_out);

}  // namespace smp
