#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "smp/tensor.hpp"

// Differentiable operations on rank-2 tensors. Every op checks shapes and
// throws DimensionError naming both operands on mismatch. The only implicit
// broadcast is `add_bias` (x + 1 b^T).
//
// Block ops treat a (blocks * block_rows) x c matrix as `blocks` stacked
// block_rows x c sub-matrices; this is how a stack of local contexts is laid
// out.
namespace smp {

Tensor matmul(const Tensor& a, const Tensor& b);
Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);
Tensor scale(const Tensor& a, double factor);
/// x + 1 b^T, b of shape [c] or [1 x c].
Tensor add_bias(const Tensor& x, const Tensor& bias);
Tensor relu(const Tensor& x);
Tensor transpose(const Tensor& x);
Tensor concat_cols(std::span<const Tensor> parts);

/// Scalar reductions, summed in ascending flat-index order.
Tensor sum(const Tensor& x);
Tensor mean(const Tensor& x);
Tensor trace(const Tensor& x);

Tensor block_sum(const Tensor& x, std::size_t block_rows);
Tensor block_mean(const Tensor& x, std::size_t block_rows);
/// Column-wise max inside each block; ties route the gradient to the first
/// maximal row.
Tensor block_max(const Tensor& x, std::size_t block_rows);
/// Repeats every row of x `times` times: [b x c] -> [b*times x c].
Tensor repeat_rows(const Tensor& x, std::size_t times);
/// Each column shifted to mean 0 and scaled to unit (population) variance
/// over all rows: (x - mean) / sqrt(var + eps).
Tensor standardize_columns(const Tensor& x, double eps = 1e-5);

Tensor gather_rows(const Tensor& x, std::span<const std::size_t> index);
/// out[index[k]] += x[k]; out has `out_rows` rows.
Tensor scatter_add_rows(const Tensor& x, std::span<const std::size_t> index,
                        std::size_t out_rows);
Tensor gather_blocks(const Tensor& x, std::size_t block_rows,
                     std::span<const std::size_t> block_index);
Tensor scatter_add_blocks(const Tensor& x, std::size_t block_rows,
                          std::span<const std::size_t> block_index,
                          std::size_t out_blocks);
/// out block i = sum over j in neighbors[i] of block j. `neighbors` must be
/// symmetric (undirected graph); the backward pass relies on it.
Tensor neighbor_sum_blocks(const Tensor& x, std::size_t block_rows,
                           const std::vector<std::vector<std::size_t>>& neighbors);

/// Mean binary cross-entropy on logits; targets in {0, 1}.
Tensor bce_with_logits(const Tensor& logits, std::span<const double> targets);
/// Mean squared error against a constant target of identical shape.
Tensor mse(const Tensor& prediction, const Tensor& target);

}  // namespace smp
