#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "smp/params.hpp"

namespace smp {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamState {
  AdamConfig config;
  std::uint64_t step = 0;
  std::vector<std::vector<double>> first_moment;
  std::vector<std::vector<double>> second_moment;

  explicit AdamState(AdamConfig cfg = {}) : config(cfg) {}
};

/// One Adam step with bias correction. `grads[k]` belongs to `params[k]`.
/// Throws OptimizerError naming the tensor if a gradient is not finite; in
/// that case nothing is modified.
void adam_update(std::span<const NamedParam> params,
                 std::span<const std::vector<double>> grads, AdamState& state);

/// Same, reading each parameter's accumulated gradient (zero if none).
void adam_update(std::span<const NamedParam> params, AdamState& state);

}  // namespace smp
