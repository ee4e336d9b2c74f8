#include "smp/ops.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <cmath>

#include "smp/errors.hpp"

namespace smp {

using detail::make_result;
using detail::Node;

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RowMap = Eigen::Map<RowMatrix>;
using ConstMap = Eigen::Map<const RowMatrix>;

namespace {

void require_matrix(const Tensor& t, const char* op) {
  if (!t.defined() || t.rank() != 2) {
    throw DimensionError(std::string(op) + ": expected a matrix, got " +
                         shape_string(t.shape()));
  }
}

[[noreturn]] void mismatch(const char* op, const Tensor& a, const Tensor& b) {
  throw DimensionError(std::string(op) + ": incompatible shapes " +
                       shape_string(a.shape()) + " and " + shape_string(b.shape()));
}

void require_same_shape(const char* op, const Tensor& a, const Tensor& b) {
  if (a.shape() != b.shape()) mismatch(op, a, b);
}

void require_blocks(const char* op, const Tensor& x, std::size_t block_rows) {
  require_matrix(x, op);
  if (block_rows == 0 || x.rows() % block_rows != 0) {
    throw DimensionError(std::string(op) + ": " + shape_string(x.shape()) +
                         " is not a stack of blocks with " +
                         std::to_string(block_rows) + " rows");
  }
}

}  // namespace

Tensor matmul(const Tensor& a, const Tensor& b) {
  require_matrix(a, "matmul");
  require_matrix(b, "matmul");
  if (a.cols() != b.rows()) mismatch("matmul", a, b);
  const auto m = static_cast<Eigen::Index>(a.rows());
  const auto k = static_cast<Eigen::Index>(a.cols());
  const auto n = static_cast<Eigen::Index>(b.cols());
  std::vector<double> out(static_cast<std::size_t>(m * n));
  ConstMap av(a.values().data(), m, k), bv(b.values().data(), k, n);
  RowMap(out.data(), m, n).noalias() = av * bv;
  return make_result({a.rows(), b.cols()}, std::move(out), {a, b}, [m, k, n](Node& self) {
    ConstMap g(self.grad.data(), m, n);
    Node& na = *self.parents[0];
    Node& nb = *self.parents[1];
    if (na.requires_grad) {
      // dA = dC B^T
      RowMap(na.grad.data(), m, k).noalias() += g * ConstMap(nb.value.data(), k, n).transpose();
    }
    if (nb.requires_grad) {
      // dB = A^T dC
      RowMap(nb.grad.data(), k, n).noalias() += ConstMap(na.value.data(), m, k).transpose() * g;
    }
  });
}

Tensor add(const Tensor& a, const Tensor& b) {
  require_same_shape("add", a, b);
  std::vector<double> out(a.values().begin(), a.values().end());
  auto bv = b.values();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += bv[i];
  return make_result(a.shape(), std::move(out), {a, b}, [](Node& self) {
    for (auto& p : self.parents) {
      if (!p->requires_grad) continue;
      for (std::size_t i = 0; i < self.grad.size(); ++i) p->grad[i] += self.grad[i];
    }
  });
}

Tensor sub(const Tensor& a, const Tensor& b) {
  require_same_shape("sub", a, b);
  std::vector<double> out(a.values().begin(), a.values().end());
  auto bv = b.values();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= bv[i];
  return make_result(a.shape(), std::move(out), {a, b}, [](Node& self) {
    Node& na = *self.parents[0];
    Node& nb = *self.parents[1];
    if (na.requires_grad) {
      for (std::size_t i = 0; i < self.grad.size(); ++i) na.grad[i] += self.grad[i];
    }
    if (nb.requires_grad) {
      for (std::size_t i = 0; i < self.grad.size(); ++i) nb.grad[i] -= self.grad[i];
    }
  });
}

Tensor mul(const Tensor& a, const Tensor& b) {
  require_same_shape("mul", a, b);
  std::vector<double> out(a.numel());
  auto av = a.values();
  auto bv = b.values();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = av[i] * bv[i];
  return make_result(a.shape(), std::move(out), {a, b}, [](Node& self) {
    Node& na = *self.parents[0];
    Node& nb = *self.parents[1];
    if (na.requires_grad) {
      for (std::size_t i = 0; i < self.grad.size(); ++i) {
        na.grad[i] += self.grad[i] * nb.value[i];
      }
    }
    if (nb.requires_grad) {
      for (std::size_t i = 0; i < self.grad.size(); ++i) {
        nb.grad[i] += self.grad[i] * na.value[i];
      }
    }
  });
}

Tensor scale(const Tensor& a, double factor) {
  std::vector<double> out(a.values().begin(), a.values().end());
  for (auto& v : out) v *= factor;
  return make_result(a.shape(), std::move(out), {a}, [factor](Node& self) {
    Node& na = *self.parents[0];
    for (std::size_t i = 0; i < self.grad.size(); ++i) {
      na.grad[i] += self.grad[i] * factor;
    }
  });
}

Tensor add_bias(const Tensor& x, const Tensor& bias) {
  require_matrix(x, "add_bias");
  const std::size_t r = x.rows(), c = x.cols();
  const bool vector_like =
      (bias.rank() == 1 && bias.shape()[0] == c) ||
      (bias.rank() == 2 && bias.shape()[0] == 1 && bias.shape()[1] == c);
  if (!vector_like) mismatch("add_bias", x, bias);
  std::vector<double> out(x.values().begin(), x.values().end());
  auto bv = bias.values();
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < c; ++j) out[i * c + j] += bv[j];
  }
  return make_result(x.shape(), std::move(out), {x, bias}, [r, c](Node& self) {
    Node& nx = *self.parents[0];
    Node& nb = *self.parents[1];
    if (nx.requires_grad) {
      for (std::size_t i = 0; i < self.grad.size(); ++i) nx.grad[i] += self.grad[i];
    }
    if (nb.requires_grad) {
      for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < c; ++j) nb.grad[j] += self.grad[i * c + j];
      }
    }
  });
}

Tensor relu(const Tensor& x) {
  std::vector<double> out(x.values().begin(), x.values().end());
  for (auto& v : out) v = v > 0.0 ? v : 0.0;
  if (auto* rec = detail::active_kink_recorder()) {
    for (double v : x.values()) rec->record(v > 0.0);
  }
  return make_result(x.shape(), std::move(out), {x}, [](Node& self) {
    Node& nx = *self.parents[0];
    for (std::size_t i = 0; i < self.grad.size(); ++i) {
      if (nx.value[i] > 0.0) nx.grad[i] += self.grad[i];
    }
  });
}

Tensor transpose(const Tensor& x) {
  require_matrix(x, "transpose");
  const std::size_t r = x.rows(), c = x.cols();
  std::vector<double> out(r * c);
  auto xv = x.values();
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < c; ++j) out[j * r + i] = xv[i * c + j];
  }
  return make_result({c, r}, std::move(out), {x}, [r, c](Node& self) {
    Node& nx = *self.parents[0];
    for (std::size_t i = 0; i < r; ++i) {
      for (std::size_t j = 0; j < c; ++j) nx.grad[i * c + j] += self.grad[j * r + i];
    }
  });
}

Tensor concat_cols(std::span<const Tensor> parts) {
  if (parts.empty()) throw DimensionError("concat_cols: no operands");
  const std::size_t r = parts[0].rows();
  std::vector<std::size_t> widths;
  std::size_t total = 0;
  for (const auto& p : parts) {
    require_matrix(p, "concat_cols");
    if (p.rows() != r) mismatch("concat_cols", parts[0], p);
    widths.push_back(p.cols());
    total += p.cols();
  }
  std::vector<double> out(r * total);
  std::size_t offset = 0;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    auto pv = parts[k].values();
    const std::size_t w = widths[k];
    for (std::size_t i = 0; i < r; ++i) {
      std::copy_n(pv.data() + i * w, w, out.data() + i * total + offset);
    }
    offset += w;
  }
  std::vector<Tensor> parents(parts.begin(), parts.end());
  return make_result({r, total}, std::move(out), std::move(parents),
                     [r, total, widths](Node& self) {
                       std::size_t off = 0;
                       for (std::size_t k = 0; k < widths.size(); ++k) {
                         Node& p = *self.parents[k];
                         const std::size_t w = widths[k];
                         if (p.requires_grad) {
                           for (std::size_t i = 0; i < r; ++i) {
                             for (std::size_t j = 0; j < w; ++j) {
                               p.grad[i * w + j] += self.grad[i * total + off + j];
                             }
                           }
                         }
                         off += w;
                       }
                     });
}

Tensor sum(const Tensor& x) {
  double acc = 0.0;
  for (double v : x.values()) acc += v;
  return make_result({}, {acc}, {x}, [](Node& self) {
    Node& nx = *self.parents[0];
    const double g = self.grad[0];
    for (auto& v : nx.grad) v += g;
  });
}

Tensor mean(const Tensor& x) {
  if (x.numel() == 0) throw DimensionError("mean of an empty tensor");
  return scale(sum(x), 1.0 / static_cast<double>(x.numel()));
}

Tensor trace(const Tensor& x) {
  require_matrix(x, "trace");
  if (x.rows() != x.cols()) throw DimensionError("trace of non-square " + shape_string(x.shape()));
  const std::size_t n = x.rows();
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x.values()[i * n + i];
  return make_result({}, {acc}, {x}, [n](Node& self) {
    Node& nx = *self.parents[0];
    for (std::size_t i = 0; i < n; ++i) nx.grad[i * n + i] += self.grad[0];
  });
}

Tensor block_sum(const Tensor& x, std::size_t block_rows) {
  require_blocks("block_sum", x, block_rows);
  const std::size_t c = x.cols();
  const std::size_t blocks = x.rows() / block_rows;
  std::vector<double> out(blocks * c, 0.0);
  auto xv = x.values();
  for (std::size_t b = 0; b < blocks; ++b) {
    double* dst = out.data() + b * c;
    for (std::size_t r = 0; r < block_rows; ++r) {
      const double* src = xv.data() + (b * block_rows + r) * c;
      for (std::size_t j = 0; j < c; ++j) dst[j] += src[j];
    }
  }
  return make_result({blocks, c}, std::move(out), {x}, [blocks, block_rows, c](Node& self) {
    Node& nx = *self.parents[0];
    for (std::size_t b = 0; b < blocks; ++b) {
      const double* g = self.grad.data() + b * c;
      for (std::size_t r = 0; r < block_rows; ++r) {
        double* dst = nx.grad.data() + (b * block_rows + r) * c;
        for (std::size_t j = 0; j < c; ++j) dst[j] += g[j];
      }
    }
  });
}

Tensor block_mean(const Tensor& x, std::size_t block_rows) {
  return scale(block_sum(x, block_rows), 1.0 / static_cast<double>(block_rows));
}

Tensor block_max(const Tensor& x, std::size_t block_rows) {
  require_blocks("block_max", x, block_rows);
  const std::size_t c = x.cols();
  const std::size_t blocks = x.rows() / block_rows;
  std::vector<double> out(blocks * c);
  std::vector<std::size_t> argmax(blocks * c);
  auto xv = x.values();
  for (std::size_t b = 0; b < blocks; ++b) {
    for (std::size_t j = 0; j < c; ++j) {
      std::size_t best = b * block_rows;
      for (std::size_t r = 1; r < block_rows; ++r) {
        const std::size_t row = b * block_rows + r;
        if (xv[row * c + j] > xv[best * c + j]) best = row;
      }
      out[b * c + j] = xv[best * c + j];
      argmax[b * c + j] = best;
    }
  }
  if (auto* rec = detail::active_kink_recorder()) {
    for (auto a : argmax) rec->record(a);
  }
  return make_result({blocks, c}, std::move(out), {x},
                     [c, argmax = std::move(argmax)](Node& self) {
                       Node& nx = *self.parents[0];
                       for (std::size_t k = 0; k < argmax.size(); ++k) {
                         nx.grad[argmax[k] * c + k % c] += self.grad[k];
                       }
                     });
}

Tensor standardize_columns(const Tensor& x, double eps) {
  require_matrix(x, "standardize_columns");
  const std::size_t r = x.rows(), c = x.cols();
  if (r == 0) throw DimensionError("standardize_columns on an empty matrix");
  auto xv = x.values();
  std::vector<double> mu(c, 0.0), inv_sd(c, 0.0), out(r * c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) mu[j] += xv[i * c + j];
  for (auto& m : mu) m /= static_cast<double>(r);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < c; ++j) {
      const double d = xv[i * c + j] - mu[j];
      inv_sd[j] += d * d;
    }
  }
  for (auto& v : inv_sd) v = 1.0 / std::sqrt(v / static_cast<double>(r) + eps);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) out[i * c + j] = (xv[i * c + j] - mu[j]) * inv_sd[j];
  std::vector<double> y = out;
  return make_result({r, c}, std::move(out), {x},
                     [r, c, inv_sd = std::move(inv_sd), y = std::move(y)](Node& self) {
                       Node& nx = *self.parents[0];
                       // dx = (g - mean(g) - y mean(g y)) / sd, column by column.
                       std::vector<double> gm(c, 0.0), gy(c, 0.0);
                       for (std::size_t i = 0; i < r; ++i) {
                         for (std::size_t j = 0; j < c; ++j) {
                           gm[j] += self.grad[i * c + j];
                           gy[j] += self.grad[i * c + j] * y[i * c + j];
                         }
                       }
                       for (std::size_t j = 0; j < c; ++j) {
                         gm[j] /= static_cast<double>(r);
                         gy[j] /= static_cast<double>(r);
                       }
                       for (std::size_t i = 0; i < r; ++i) {
                         for (std::size_t j = 0; j < c; ++j) {
                           const std::size_t k = i * c + j;
                           nx.grad[k] += inv_sd[j] * (self.grad[k] - gm[j] - y[k] * gy[j]);
                         }
                       }
                     });
}

Tensor repeat_rows(const Tensor& x, std::size_t times) {
  require_matrix(x, "repeat_rows");
  const std::size_t r = x.rows(), c = x.cols();
  std::vector<double> out(r * times * c);
  auto xv = x.values();
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t t = 0; t < times; ++t) {
      std::copy_n(xv.data() + i * c, c, out.data() + (i * times + t) * c);
    }
  }
  return make_result({r * times, c}, std::move(out), {x}, [r, c, times](Node& self) {
    Node& nx = *self.parents[0];
    for (std::size_t i = 0; i < r; ++i) {
      for (std::size_t t = 0; t < times; ++t) {
        const double* g = self.grad.data() + (i * times + t) * c;
        for (std::size_t j = 0; j < c; ++j) nx.grad[i * c + j] += g[j];
      }
    }
  });
}

Tensor gather_rows(const Tensor& x, std::span<const std::size_t> index) {
  require_matrix(x, "gather_rows");
  const std::size_t r = x.rows(), c = x.cols();
  std::vector<double> out(index.size() * c);
  auto xv = x.values();
  for (std::size_t k = 0; k < index.size(); ++k) {
    if (index[k] >= r) throw DimensionError("gather_rows: row index out of range");
    std::copy_n(xv.data() + index[k] * c, c, out.data() + k * c);
  }
  std::vector<std::size_t> idx(index.begin(), index.end());
  return make_result({index.size(), c}, std::move(out), {x},
                     [c, idx = std::move(idx)](Node& self) {
                       Node& nx = *self.parents[0];
                       for (std::size_t k = 0; k < idx.size(); ++k) {
                         for (std::size_t j = 0; j < c; ++j) {
                           nx.grad[idx[k] * c + j] += self.grad[k * c + j];
                         }
                       }
                     });
}

Tensor scatter_add_rows(const Tensor& x, std::span<const std::size_t> index,
                        std::size_t out_rows) {
  require_matrix(x, "scatter_add_rows");
  if (x.rows() != index.size()) {
    throw DimensionError("scatter_add_rows: " + shape_string(x.shape()) + " rows vs " +
                         std::to_string(index.size()) + " indices");
  }
  const std::size_t c = x.cols();
  std::vector<double> out(out_rows * c, 0.0);
  auto xv = x.values();
  for (std::size_t k = 0; k < index.size(); ++k) {
    if (index[k] >= out_rows) throw DimensionError("scatter_add_rows: index out of range");
    for (std::size_t j = 0; j < c; ++j) out[index[k] * c + j] += xv[k * c + j];
  }
  std::vector<std::size_t> idx(index.begin(), index.end());
  return make_result({out_rows, c}, std::move(out), {x},
                     [c, idx = std::move(idx)](Node& self) {
                       Node& nx = *self.parents[0];
                       for (std::size_t k = 0; k < idx.size(); ++k) {
                         for (std::size_t j = 0; j < c; ++j) {
                           nx.grad[k * c + j] += self.grad[idx[k] * c + j];
                         }
                       }
                     });
}

Tensor gather_blocks(const Tensor& x, std::size_t block_rows,
                     std::span<const std::size_t> block_index) {
  require_blocks("gather_blocks", x, block_rows);
  const std::size_t blocks = x.rows() / block_rows;
  std::vector<std::size_t> rows;
  rows.reserve(block_index.size() * block_rows);
  for (auto b : block_index) {
    if (b >= blocks) throw DimensionError("gather_blocks: block index out of range");
    for (std::size_t r = 0; r < block_rows; ++r) rows.push_back(b * block_rows + r);
  }
  return gather_rows(x, rows);
}

Tensor scatter_add_blocks(const Tensor& x, std::size_t block_rows,
                          std::span<const std::size_t> block_index,
                          std::size_t out_blocks) {
  require_blocks("scatter_add_blocks", x, block_rows);
  if (x.rows() != block_index.size() * block_rows) {
    throw DimensionError("scatter_add_blocks: " + shape_string(x.shape()) + " vs " +
                         std::to_string(block_index.size()) + " blocks");
  }
  std::vector<std::size_t> rows;
  rows.reserve(x.rows());
  for (auto b : block_index) {
    for (std::size_t r = 0; r < block_rows; ++r) rows.push_back(b * block_rows + r);
  }
  return scatter_add_rows(x, rows, out_blocks * block_rows);
}

Tensor neighbor_sum_blocks(const Tensor& x, std::size_t block_rows,
                           const std::vector<std::vector<std::size_t>>& neighbors) {
  require_blocks("neighbor_sum_blocks", x, block_rows);
  const std::size_t blocks = x.rows() / block_rows;
  if (neighbors.size() != blocks) {
    throw DimensionError("neighbor_sum_blocks: " + std::to_string(blocks) + " blocks vs " +
                         std::to_string(neighbors.size()) + " adjacency lists");
  }
  const std::size_t width = block_rows * x.cols();
  std::vector<double> out(blocks * width, 0.0);
  auto xv = x.values();
  for (std::size_t i = 0; i < blocks; ++i) {
    double* dst = out.data() + i * width;
    for (auto j : neighbors[i]) {
      const double* src = xv.data() + j * width;
      for (std::size_t t = 0; t < width; ++t) dst[t] += src[t];
    }
  }
  return make_result(x.shape(), std::move(out), {x},
                     [blocks, width, adj = neighbors](Node& self) {
                       Node& nx = *self.parents[0];
                       // Symmetric adjacency: the adjoint is the same sum.
                       for (std::size_t i = 0; i < blocks; ++i) {
                         double* dst = nx.grad.data() + i * width;
                         for (auto j : adj[i]) {
                           const double* src = self.grad.data() + j * width;
                           for (std::size_t t = 0; t < width; ++t) dst[t] += src[t];
                         }
                       }
                     });
}

Tensor bce_with_logits(const Tensor& logits, std::span<const double> targets) {
  if (logits.numel() != targets.size() || targets.empty()) {
    throw DimensionError("bce_with_logits: " + shape_string(logits.shape()) + " logits vs " +
                         std::to_string(targets.size()) + " targets");
  }
  auto z = logits.values();
  double acc = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    // log(1 + e^z) - y z, stable for large |z|.
    acc += std::max(z[i], 0.0) - z[i] * targets[i] + std::log1p(std::exp(-std::abs(z[i])));
  }
  const double inv = 1.0 / static_cast<double>(z.size());
  std::vector<double> y(targets.begin(), targets.end());
  return make_result({}, {acc * inv}, {logits}, [inv, y = std::move(y)](Node& self) {
    Node& nz = *self.parents[0];
    for (std::size_t i = 0; i < y.size(); ++i) {
      const double s = 1.0 / (1.0 + std::exp(-nz.value[i]));
      nz.grad[i] += self.grad[0] * inv * (s - y[i]);
    }
  });
}

Tensor mse(const Tensor& prediction, const Tensor& target) {
  require_same_shape("mse", prediction, target);
  if (prediction.numel() == 0) throw DimensionError("mse of empty tensors");
  auto d = sub(prediction, target);
  return mean(mul(d, d));
}

}  // namespace smp
