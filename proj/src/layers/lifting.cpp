#include <functional>

#include "smp/errors.hpp"
#include "smp/layers.hpp"

namespace smp {

namespace {

Tensor fixed(std::size_t rows, std::size_t cols, std::vector<double> values) {
  return Tensor({rows, cols}, std::move(values));
}

// Row `q` of an MPNN weight matrix lands at row `rows(q)` of the lifted one.
using RowMap = std::function<std::size_t(std::size_t)>;

}  // namespace

// Each lifted layer keeps an indicator channel e (1 on the owner row, 0
// elsewhere). The equivariant block copies e and broadcasts the owner row's
// state to every row, the MLPs then run the MPNN functions row-wise, and a
// final ReLU gate driven by e zeroes every row except the owner's.
std::vector<SmpLayerParams> lift_mpnn_to_smp(std::span<const MpnnLayerParams> mpnn,
                                             std::size_t n, double gate) {
  std::vector<SmpLayerParams> out;
  for (std::size_t l = 0; l < mpnn.size(); ++l) {
    const auto& layer = mpnn[l];
    const std::size_t c_x = layer.input_dim();
    const std::size_t c_ctx = l == 0 ? c_x : 1 + c_x;
    const std::size_t x_offset = l == 0 ? 0 : 1;
    if (l > 0 && mpnn[l - 1].output_dim() != c_x) {
      throw DimensionError("MPNN layers " + std::to_string(l - 1) + " and " +
                           std::to_string(l) + " do not chain");
    }
    const std::size_t c_hat = 1 + c_x;

    SmpLayerParams lifted;
    std::vector<double> w1(c_ctx * c_hat, 0.0), w2(c_ctx * c_hat, 0.0);
    w1[0] = 1.0;
    for (std::size_t k = 0; k < c_x; ++k) {
      w2[(x_offset + k) * c_hat + 1 + k] = static_cast<double>(n);
    }
    lifted.equiv.w1 = fixed(c_ctx, c_hat, std::move(w1));
    lifted.equiv.w2 = fixed(c_ctx, c_hat, std::move(w2));
    lifted.equiv.w3 = Tensor::zeros({c_ctx, c_hat});
    lifted.equiv.bias = Tensor::zeros({c_hat});

    DefaultParams d;
    {
      // [e_i, x_i, e_j, x_j, y] -> first message layer sees only x_i, x_j, y.
      const auto& w0 = layer.message.weights[0];
      const std::size_t c_edge = w0.rows() - 2 * c_x;
      const std::size_t din = 2 * c_hat + c_edge;
      const std::size_t dout = w0.cols();
      std::vector<double> w(din * dout, 0.0);
      auto src = w0.values();
      for (std::size_t q = 0; q < w0.rows(); ++q) {
        std::size_t row;
        if (q < c_x) row = 1 + q;
        else if (q < 2 * c_x) row = c_hat + 1 + (q - c_x);
        else row = 2 * c_hat + (q - 2 * c_x);
        std::copy_n(src.data() + q * dout, dout, w.begin() + row * dout);
      }
      std::vector<Tensor> ws{fixed(din, dout, std::move(w))};
      std::vector<Tensor> bs{layer.message.biases[0].detach()};
      for (std::size_t t = 1; t < layer.message.depth(); ++t) {
        ws.push_back(layer.message.weights[t].detach());
        bs.push_back(layer.message.biases[t].detach());
      }
      d.message = MlpParams::from_layers(std::move(ws), std::move(bs));
    }
    {
      const std::size_t c_msg = layer.message.output_dim();
      std::vector<Tensor> ws, bs;
      std::size_t din = c_hat + c_msg;
      std::size_t e_index = 0;
      RowMap rows = [c_x, c_hat](std::size_t q) { return q < c_x ? 1 + q : c_hat + (q - c_x); };
      const std::size_t depth = layer.update.depth();
      for (std::size_t t = 0; t < depth; ++t) {
        const auto& wt = layer.update.weights[t];
        const auto& bt = layer.update.biases[t];
        const std::size_t dout = wt.cols();
        auto src = wt.values();
        auto bias = bt.values();
        if (t + 1 < depth) {
          // Hidden layer with e appended as a pass-through column.
          std::vector<double> w(din * (dout + 1), 0.0);
          for (std::size_t q = 0; q < wt.rows(); ++q) {
            std::copy_n(src.data() + q * dout, dout, w.begin() + rows(q) * (dout + 1));
          }
          w[e_index * (dout + 1) + dout] = 1.0;
          std::vector<double> b(bias.begin(), bias.end());
          b.push_back(0.0);
          ws.push_back(fixed(din, dout + 1, std::move(w)));
          bs.push_back(Tensor({dout + 1}, std::move(b)));
          din = dout + 1;
          e_index = dout;
          rows = [](std::size_t q) { return q; };
          continue;
        }
        // The MPNN output layer becomes a ReLU layer producing
        // [e, relu(h + gate (e - 1)), relu(-h + gate (e - 1))].
        const std::size_t width = 1 + 2 * dout;
        std::vector<double> w(din * width, 0.0);
        for (std::size_t q = 0; q < wt.rows(); ++q) {
          const std::size_t row = rows(q);
          for (std::size_t k = 0; k < dout; ++k) {
            w[row * width + 1 + k] = src[q * dout + k];
            w[row * width + 1 + dout + k] = -src[q * dout + k];
          }
        }
        w[e_index * width] = 1.0;
        for (std::size_t k = 0; k < 2 * dout; ++k) w[e_index * width + 1 + k] = gate;
        std::vector<double> b(width, 0.0);
        for (std::size_t k = 0; k < dout; ++k) {
          b[1 + k] = bias[k] - gate;
          b[1 + dout + k] = -bias[k] - gate;
        }
        ws.push_back(fixed(din, width, std::move(w)));
        bs.push_back(Tensor({width}, std::move(b)));

        std::vector<double> last(width * (1 + dout), 0.0);
        last[0] = 1.0;
        for (std::size_t k = 0; k < dout; ++k) {
          last[(1 + k) * (1 + dout) + 1 + k] = 1.0;
          last[(1 + dout + k) * (1 + dout) + 1 + k] = -1.0;
        }
        ws.push_back(fixed(width, 1 + dout, std::move(last)));
        bs.push_back(Tensor::zeros({1 + dout}));
      }
      d.update = MlpParams::from_layers(std::move(ws), std::move(bs));
    }
    lifted.kind = std::move(d);
    out.push_back(std::move(lifted));
  }
  return out;
}

Tensor lifted_states(const LocalContext& u, std::size_t layers) {
  const std::size_t skip = layers == 0 ? 0 : 1;
  const std::size_t c = u.channels();
  if (c < skip) throw DimensionError("context too narrow for lifted states");
  const auto owners = u.owner_flat();
  auto v = u.data.values();
  std::vector<double> out;
  out.reserve(u.nodes * (c - skip));
  for (auto r : owners) out.insert(out.end(), v.begin() + r * c + skip, v.begin() + (r + 1) * c);
  return Tensor({u.nodes, c - skip}, std::move(out));
}

}  // namespace smp
