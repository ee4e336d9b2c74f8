#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "smp/graph.hpp"
#include "smp/params.hpp"

namespace smp {

/// Bijection on node indices; `(*this)(i)` is the new position of node i.
class Permutation {
 public:
  explicit Permutation(std::vector<std::size_t> mapping);

  static Permutation identity(std::size_t n);
  static Permutation random(std::size_t n, Rng& rng);

  std::size_t size() const { return mapping_.size(); }
  std::size_t operator()(std::size_t i) const { return mapping_[i]; }
  const std::vector<std::size_t>& mapping() const { return mapping_; }
  Permutation inverse() const;

  bool operator==(const Permutation&) const = default;

 private:
  std::vector<std::size_t> mapping_;
};

/// (outer o inner)(i) = outer(inner(i)).
Permutation compose(const Permutation& outer, const Permutation& inner);

// Group actions. For every kind, (pi . obj) moves the entry indexed by node i
// to index pi(i): out[pi(i)] = in[i], i.e. out[i] = in[pi^-1(i)].

/// Node-row objects (n x c): rows move.
RealMatrix permute_node_rows(const Permutation& pi, const RealMatrix& x);

/// Node-pair objects (n x n): both axes move.
template <typename T>
Matrix<T> permute_node_pairs(const Permutation& pi, const Matrix<T>& a);

/// n x n x c tensors stored row-major: the first two axes move, channels stay.
std::vector<double> permute_pair_tensor(const Permutation& pi, std::span<const double> values,
                                        std::size_t channels);

/// Relabels edge endpoints and moves node/edge feature rows with their owners.
Graph permute_graph(const Permutation& pi, const Graph& g);

}  // namespace smp

#include "smp/permutation_impl.hpp"
