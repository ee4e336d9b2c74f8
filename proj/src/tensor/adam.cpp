#include "smp/adam.hpp"

#include <cmath>

#include "smp/errors.hpp"

namespace smp {

void adam_update(std::span<const NamedParam> params,
                 std::span<const std::vector<double>> grads, AdamState& state) {
  if (params.size() != grads.size()) {
    throw DimensionError("adam_update: " + std::to_string(params.size()) +
                         " parameters but " + std::to_string(grads.size()) + " gradients");
  }
  for (std::size_t k = 0; k < params.size(); ++k) {
    if (grads[k].size() != params[k].tensor.numel()) {
      throw DimensionError("adam_update: gradient for '" + params[k].name + "' has " +
                           std::to_string(grads[k].size()) + " entries, parameter " +
                           shape_string(params[k].tensor.shape()));
    }
    for (double g : grads[k]) {
      if (!std::isfinite(g)) {
        throw OptimizerError("non-finite gradient in '" + params[k].name + "'");
      }
    }
  }
  if (state.first_moment.empty()) {
    for (const auto& p : params) {
      state.first_moment.emplace_back(p.tensor.numel(), 0.0);
      state.second_moment.emplace_back(p.tensor.numel(), 0.0);
    }
  } else if (state.first_moment.size() != params.size()) {
    throw DimensionError("adam_update: optimizer state tracks " +
                         std::to_string(state.first_moment.size()) + " tensors, got " +
                         std::to_string(params.size()));
  }

  const auto& cfg = state.config;
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double correction1 = 1.0 - std::pow(cfg.beta1, t);
  const double correction2 = 1.0 - std::pow(cfg.beta2, t);
  for (std::size_t k = 0; k < params.size(); ++k) {
    Tensor tensor = params[k].tensor;
    auto values = tensor.mutable_values();
    auto& m = state.first_moment[k];
    auto& v = state.second_moment[k];
    const auto& g = grads[k];
    for (std::size_t i = 0; i < values.size(); ++i) {
      m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * g[i];
      v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * g[i] * g[i];
      const double m_hat = m[i] / correction1;
      const double v_hat = v[i] / correction2;
      values[i] -= cfg.lr * m_hat / (std::sqrt(v_hat) + cfg.eps);
    }
  }
}

void adam_update(std::span<const NamedParam> params, AdamState& state) {
  std::vector<std::vector<double>> grads;
  grads.reserve(params.size());
  for (const auto& p : params) grads.push_back(p.tensor.grad_or_zeros());
  adam_update(params, grads, state);
}

}  // namespace smp
