#pragma once

#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include "smp/tensor.hpp"

namespace smp {

using Rng = std::mt19937_64;

struct NamedParam {
  std::string name;
  Tensor tensor;
};

using ParamList = std::vector<NamedParam>;

/// Trainable [fan_in x fan_out] matrix, uniform in +-sqrt(6 / (fan_in + fan_out)).
Tensor glorot_uniform(std::size_t fan_in, std::size_t fan_out, Rng& rng);
/// Trainable zero vector of length n.
Tensor zero_bias(std::size_t n);

std::size_t parameter_count(const ParamList& params);
void zero_grads(ParamList& params);

}  // namespace smp
