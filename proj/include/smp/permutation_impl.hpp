#pragma once

#include <string>

#include "smp/errors.hpp"

namespace smp {

template <typename T>
Matrix<T> permute_node_pairs(const Permutation& pi, const Matrix<T>& a) {
  if (a.rows != pi.size() || a.cols != pi.size()) {
    throw DimensionError("permutation of size " + std::to_string(pi.size()) +
                         " applied to " + std::to_string(a.rows) + "x" +
                         std::to_string(a.cols) + " pair matrix");
  }
  Matrix<T> out(a.rows, a.cols);
  for (std::size_t i = 0; i < a.rows; ++i) {
    for (std::size_t j = 0; j < a.cols; ++j) out(pi(i), pi(j)) = a(i, j);
  }
  return out;
}

}  // namespace smp
