#include "smp/mlp.hpp"

#include <cmath>

#include "smp/errors.hpp"
#include "smp/ops.hpp"

namespace smp {

Tensor glorot_uniform(std::size_t fan_in, std::size_t fan_out, Rng& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  std::uniform_real_distribution<double> dist(-limit, limit);
  std::vector<double> data(fan_in * fan_out);
  for (auto& v : data) v = dist(rng);
  return Tensor({fan_in, fan_out}, std::move(data), true);
}

Tensor zero_bias(std::size_t n) { return Tensor::zeros({n}, true); }

std::size_t parameter_count(const ParamList& params) {
  std::size_t total = 0;
  for (const auto& p : params) total += p.tensor.numel();
  return total;
}

void zero_grads(ParamList& params) {
  for (auto& p : params) p.tensor.zero_grad();
}

MlpParams MlpParams::init(std::span<const std::size_t> dims, Rng& rng) {
  if (dims.size() < 2) throw DimensionError("MLP needs at least input and output sizes");
  MlpParams p;
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    p.weights.push_back(glorot_uniform(dims[l], dims[l + 1], rng));
    p.biases.push_back(zero_bias(dims[l + 1]));
  }
  return p;
}

MlpParams MlpParams::from_layers(std::vector<Tensor> weights, std::vector<Tensor> biases) {
  if (weights.empty() || weights.size() != biases.size()) {
    throw DimensionError("MLP needs one bias per weight matrix");
  }
  for (std::size_t l = 0; l < weights.size(); ++l) {
    const auto& w = weights[l];
    if (w.rank() != 2 || biases[l].numel() != w.cols()) {
      throw DimensionError("MLP layer " + std::to_string(l) + ": weight " +
                           shape_string(w.shape()) + " vs bias " +
                           shape_string(biases[l].shape()));
    }
    if (l > 0 && weights[l - 1].cols() != w.rows()) {
      throw DimensionError("MLP layers " + std::to_string(l - 1) + " and " +
                           std::to_string(l) + " do not chain: " +
                           shape_string(weights[l - 1].shape()) + " then " +
                           shape_string(w.shape()));
    }
    for (const Tensor* t : {&w, static_cast<const Tensor*>(&biases[l])}) {
      for (double v : t->values()) {
        if (!std::isfinite(v)) throw ContractError("MLP weights must be finite");
      }
    }
  }
  MlpParams p;
  p.weights = std::move(weights);
  p.biases = std::move(biases);
  return p;
}

std::size_t MlpParams::input_dim() const { return weights.front().rows(); }
std::size_t MlpParams::output_dim() const { return weights.back().cols(); }

void MlpParams::collect(const std::string& prefix, ParamList& out) const {
  for (std::size_t l = 0; l < weights.size(); ++l) {
    out.push_back({prefix + ".W" + std::to_string(l), weights[l]});
    out.push_back({prefix + ".b" + std::to_string(l), biases[l]});
  }
}

Tensor mlp_forward(const Tensor& x, const MlpParams& p) {
  if (p.weights.empty()) throw DimensionError("mlp_forward: empty MLP");
  if (x.rank() != 2 || x.cols() != p.input_dim()) {
    throw DimensionError("mlp_forward: input " + shape_string(x.shape()) +
                         " does not match first layer " +
                         shape_string(p.weights.front().shape()));
  }
  Tensor h = x;
  for (std::size_t l = 0; l < p.depth(); ++l) {
    h = add_bias(matmul(h, p.weights[l]), p.biases[l]);
    if (l + 1 < p.depth()) h = relu(h);
  }
  return h;
}

std::vector<std::size_t> mlp_dims(std::size_t d_in, std::size_t width,
                                  std::size_t hidden_layers, std::size_t d_out) {
  std::vector<std::size_t> dims{d_in};
  for (std::size_t i = 0; i < hidden_layers; ++i) dims.push_back(width);
  dims.push_back(d_out);
  return dims;
}

}  // namespace smp
