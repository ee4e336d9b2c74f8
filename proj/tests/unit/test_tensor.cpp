#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "smp/adam.hpp"
#include "smp/checkpoint.hpp"
#include "smp/errors.hpp"
#include "smp/gradcheck.hpp"
#include "smp/mlp.hpp"
#include "smp/ops.hpp"

using namespace smp;

namespace {

std::vector<double> vec(std::span<const double> s) { return {s.begin(), s.end()}; }

}  // namespace

TEST_CASE("mlp: zero input with zero biases gives zeros") {
  Rng rng(1);
  auto p = MlpParams::init(mlp_dims(3, 5, 1, 4), rng);
  const Tensor y = mlp_forward(Tensor::zeros({2, 3}), p);
  CHECK(y.rows() == 2);
  CHECK(y.cols() == 4);
  for (double v : y.values()) CHECK(v == 0.0);
}

TEST_CASE("mlp: identity layer passes input through") {
  auto p = MlpParams::from_layers({Tensor::identity(3)}, {Tensor::zeros({3})});
  const Tensor y = mlp_forward(Tensor::matrix({{1, 2, 3}}), p);
  CHECK(vec(y.values()) == std::vector<double>{1, 2, 3});
}

TEST_CASE("mlp: hand matrix multiply") {
  auto p = MlpParams::from_layers({Tensor::matrix({{2}, {0}, {0}})}, {Tensor({1}, {1.0})});
  CHECK(mlp_forward(Tensor::matrix({{1, 5, 5}}), p).item() == 3.0);
}

TEST_CASE("mlp: width mismatch throws") {
  auto p = MlpParams::from_layers({Tensor::identity(3)}, {Tensor::zeros({3})});
  CHECK_THROWS_AS(mlp_forward(Tensor::zeros({1, 2}), p), DimensionError);
}

TEST_CASE("autodiff: gradient of sum is ones") {
  Tensor w = Tensor::full({2, 2}, 0.3, true);
  backprop(sum(w));
  CHECK(vec(w.grad()) == std::vector<double>{1, 1, 1, 1});
}

TEST_CASE("autodiff: gradient of sum of squares is 2W") {
  Tensor w = Tensor({2, 2}, {1, 2, 3, 4}, true);
  backprop(sum(mul(w, w)));
  CHECK(vec(w.grad()) == std::vector<double>{2, 4, 6, 8});
}

TEST_CASE("autodiff: gradient of trace(WW) is 2W^T") {
  Tensor w = Tensor({2, 2}, {0, 1, 1, 0}, true);
  backprop(trace(matmul(w, w)));
  CHECK(vec(w.grad()) == std::vector<double>{0, 2, 2, 0});
  const auto res = finite_difference_check([&] { return trace(matmul(w, w)); }, {{{"W", w}}});
  CHECK(res.max_relative_error < 1e-8);
}

TEST_CASE("autodiff: leaf gradients accumulate across backprop calls") {
  Tensor w = Tensor({1}, {2.0}, true);
  backprop(sum(mul(w, w)));
  backprop(sum(mul(w, w)));
  CHECK(w.grad()[0] == doctest::Approx(8.0));
}

TEST_CASE("autodiff: no-grad guard records nothing") {
  Tensor w = Tensor({1}, {2.0}, true);
  NoGradGuard guard;
  CHECK_FALSE(sum(w).requires_grad());
}

TEST_CASE("autodiff: relu and block max route gradients to the active entries") {
  Tensor x = Tensor({4, 1}, {-1, 2, 3, 0.5}, true);
  backprop(sum(block_max(relu(x), 2)));
  CHECK(vec(x.grad()) == std::vector<double>{0, 1, 1, 0});
}

TEST_CASE("adam: zero gradient leaves params and counts the step") {
  Tensor w = Tensor({2}, {1.0, -1.0}, true);
  ParamList params{{"w", w}};
  AdamState st;
  const std::vector<std::vector<double>> grads{{0.0, 0.0}};
  adam_update(params, grads, st);
  CHECK(vec(w.values()) == std::vector<double>{1.0, -1.0});
  CHECK(st.step == 1);
}

TEST_CASE("adam: first step moves by about lr times the gradient sign") {
  Tensor w = Tensor({1}, {1.0}, true);
  ParamList params{{"w", w}};
  AdamState st(AdamConfig{0.1, 0.9, 0.999, 1e-8});
  const std::vector<std::vector<double>> grads{{1.0}};
  adam_update(params, grads, st);
  CHECK(w.values()[0] == doctest::Approx(0.9).epsilon(1e-6));
}

TEST_CASE("adam: identical params and grads give identical updates") {
  Tensor a = Tensor({1}, {0.7}, true), b = Tensor({1}, {0.7}, true);
  ParamList params{{"a", a}, {"b", b}};
  AdamState st;
  for (int i = 0; i < 5; ++i) {
    const std::vector<std::vector<double>> grads{{0.3 * i}, {0.3 * i}};
    adam_update(params, grads, st);
  }
  CHECK(a.values()[0] == b.values()[0]);
}

TEST_CASE("adam: non-finite gradient throws and leaves params alone") {
  Tensor w = Tensor({1}, {1.0}, true);
  ParamList params{{"w", w}};
  AdamState st;
  const std::vector<std::vector<double>> grads{{std::nan("")}};
  CHECK_THROWS_AS(adam_update(params, grads, st), OptimizerError);
  CHECK(w.values()[0] == 1.0);
}

TEST_CASE("gradcheck: linear function is exact") {
  Tensor t = Tensor({3}, {0.1, -4.0, 2.5}, true);
  const auto r = finite_difference_check([&] { return sum(t); }, {{{"t", t}}});
  CHECK(r.max_relative_error < 1e-10);
  CHECK(r.entries == 3);
}

TEST_CASE("gradcheck: quadratic") {
  Tensor t = Tensor({3}, {1, 2, 3}, true);
  const auto r = finite_difference_check([&] { return sum(mul(t, t)); }, {{{"t", t}}}, 1e-5);
  CHECK(r.max_relative_error < 1e-7);
}

TEST_CASE("gradcheck: an entry sitting on a relu kink is skipped, not scored") {
  Tensor t = Tensor({2}, {0.0, 1.0}, true);
  const auto r = finite_difference_check([&] { return sum(relu(t)); }, {{{"t", t}}});
  CHECK(r.skipped_kinks == 1);
  CHECK(r.max_relative_error < 1e-8);
}

TEST_CASE("gradcheck: a broken backward pass is caught") {
  // Doubles the value but only passes the incoming gradient through.
  Tensor t = Tensor({2}, {0.5, 1.5}, true);
  auto broken = [&] {
    std::vector<double> v{2 * t.values()[0], 2 * t.values()[1]};
    return sum(detail::make_result({2}, std::move(v), {t}, [](detail::Node& self) {
      auto& parent = *self.parents[0];
      parent.ensure_grad();
      for (std::size_t i = 0; i < 2; ++i) parent.grad[i] += self.grad[i];
    }));
  };
  const auto r = finite_difference_check(broken, {{{"t", t}}});
  CHECK(r.max_relative_error > 0.4);
}

TEST_CASE("checkpoint: round trip preserves tensors and meta") {
  const auto path = std::filesystem::temp_directory_path() / "smp_unit_ckpt.bin";
  Tensor a = Tensor({2, 3}, {1, 2, 3, 4, 5, 6.5}, true);
  Tensor b = Tensor({1}, {-0.25}, true);
  write_checkpoint(path, {{"k", "v w"}}, {{"a", a}, {"b", b}});
  const auto ck = read_checkpoint(path);
  CHECK(ck.meta_value("k") == "v w");
  CHECK(ck.meta_value("missing").empty());
  Tensor a2 = Tensor::zeros({2, 3}, true), b2 = Tensor::zeros({1}, true);
  ParamList into{{"a", a2}, {"b", b2}};
  load_parameters(ck, into);
  CHECK(vec(a2.values()) == vec(a.values()));
  CHECK(b2.values()[0] == -0.25);
  Tensor wrong = Tensor::zeros({3, 2}, true);
  ParamList bad{{"a", wrong}};
  CHECK_THROWS_AS(load_parameters(ck, bad), CheckpointError);
  std::filesystem::remove(path);
}
