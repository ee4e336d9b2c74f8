#include <doctest.h>

#include "smp/context.hpp"
#include "smp/errors.hpp"
#include "smp/graph_algorithms.hpp"
#include "smp/layers.hpp"
#include "smp/ops.hpp"
#include "smp/permutation.hpp"
#include "smp/verify.hpp"

using namespace smp;

namespace {

std::vector<double> vec(std::span<const double> s) { return {s.begin(), s.end()}; }

EquivLinearParams equiv(std::size_t c, double w1, double w2, double w3, double b) {
  EquivLinearParams p;
  p.w1 = Tensor::full({c, c}, 0.0);
  p.w2 = Tensor::full({c, c}, 0.0);
  p.w3 = Tensor::full({c, c}, 0.0);
  for (std::size_t i = 0; i < c; ++i) {
    p.w1.mutable_values()[i * c + i] = w1;
    p.w2.mutable_values()[i * c + i] = w2;
    p.w3.mutable_values()[i * c + i] = w3;
  }
  p.bias = Tensor::full({c}, b);
  return p;
}

MlpParams linear(Tensor w) {
  const std::size_t out = w.cols();
  return MlpParams::from_layers({std::move(w)}, {Tensor::zeros({out})});
}

Tensor stacked_identity(std::size_t blocks, std::size_t c) {
  std::vector<double> v(blocks * c * c, 0.0);
  for (std::size_t b = 0; b < blocks; ++b)
    for (std::size_t i = 0; i < c; ++i) v[(b * c + i) * c + i] = 1.0;
  return Tensor({blocks * c, c}, std::move(v));
}

}  // namespace

TEST_CASE("context: one-hot init without features") {
  const auto u = init_local_context(Graph(3));
  CHECK(u.channels() == 1);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(u.at(i, j, 0) == (i == j ? 1.0 : 0.0));
}

TEST_CASE("context: node features sit on the owner row") {
  Graph g(2);
  g.set_node_features(1, {0.5, -2.0});
  const auto u = init_local_context(g);
  CHECK(u.at(0, 0, 0) == 1.0);
  CHECK(u.at(0, 0, 1) == 0.5);
  CHECK(u.at(0, 1, 0) == 0.0);
  CHECK(u.at(0, 1, 1) == 0.0);
}

TEST_CASE("context: init commutes with relabelling") {
  Rng rng(3);
  Graph g = random_graph(6, 0.5, rng);
  random_features(g, 2, 0, rng);
  const Permutation pi = Permutation::random(6, rng);
  CHECK(vec(init_local_context(permute_graph(pi, g)).data.values()) ==
        vec(permute_context(pi, init_local_context(g)).data.values()));
}

TEST_CASE("equivariant linear: identity, bias broadcast, mean term") {
  Rng rng(1);
  const auto u = random_context(3, 2, rng);
  CHECK(vec(equivariant_linear(u, equiv(2, 1, 0, 0, 0)).data.values()) == vec(u.data.values()));
  const auto biased = equivariant_linear(u, equiv(2, 0, 0, 0, 0.25));
  for (double v : biased.data.values()) CHECK(v == 0.25);

  // n=2, U_0 = I, W2 = I: every row becomes the mean row.
  LocalContext two = init_local_context(Graph(2)).with_data(Tensor({4, 2}, {1, 0, 0, 1, 0, 0, 0, 0}));
  const auto out = equivariant_linear(two, equiv(2, 0, 1, 0, 0));
  CHECK(vec(out.data.values()) == std::vector<double>{.5, .5, .5, .5, 0, 0, 0, 0});
}

TEST_CASE("equivariant linear: W3 writes the block mean onto the owner row only") {
  LocalContext two = init_local_context(Graph(2)).with_data(Tensor({4, 1}, {2, 4, 6, 8}));
  const auto out = equivariant_linear(two, equiv(1, 0, 0, 1, 0));
  CHECK(vec(out.data.values()) == std::vector<double>{3, 0, 0, 7});
}

TEST_CASE("fast layer: P3 centre node with W4 = W5 = 0") {
  const Graph p3 = path_graph(3);
  Rng rng(0);
  auto p = SmpLayerParams::fast(1, 1, rng);
  p.equiv = equiv(1, 1, 0, 0, 0);
  auto& f = std::get<FastParams>(p.kind);
  f.w4 = Tensor::zeros({1, 1});
  f.w5 = Tensor::zeros({1, 1});
  const auto out = smp_fast_layer(init_local_context(p3), p3, p);
  // d_avg = 4/3: delta_1 + (3/4)(delta_0 + delta_2).
  CHECK(out.at(1, 0, 0) == doctest::Approx(0.75));
  CHECK(out.at(1, 1, 0) == doctest::Approx(1.0));
  CHECK(out.at(1, 2, 0) == doctest::Approx(0.75));
}

TEST_CASE("fast layer: edgeless graph returns the linear block") {
  Rng rng(4);
  const Graph g(4);
  const auto u = random_context(4, 3, rng);
  const auto p = SmpLayerParams::fast(3, 3, rng);
  CHECK(vec(smp_fast_layer(u, g, p).data.values()) == vec(equivariant_linear(u, p.equiv).data.values()));
}

TEST_CASE("default layer: projection message and summing update reduce to the fast layer") {
  Rng rng(5);
  const Graph g = random_graph(6, 0.5, rng);
  const std::size_t c = 3;
  const auto u = random_context(6, c, rng);
  auto fast = SmpLayerParams::fast(c, c, rng);
  std::get<FastParams>(fast.kind).w4 = Tensor::zeros({c, c});
  std::get<FastParams>(fast.kind).w5 = Tensor::zeros({c, c});

  SmpLayerParams def = fast;
  // message([U_i | U_j]) = U_j, update([U_i | agg]) = U_i + agg.
  Tensor proj = Tensor::zeros({2 * c, c});
  for (std::size_t i = 0; i < c; ++i) proj.mutable_values()[(c + i) * c + i] = 1.0;
  def.kind = DefaultParams{linear(proj), linear(stacked_identity(2, c))};
  CHECK(max_abs_diff(smp_default_layer(u, g, def).data.values(),
                     smp_fast_layer(u, g, fast).data.values()) < 1e-12);
}

TEST_CASE("default layer: edgeless graph updates with a zero aggregate") {
  Rng rng(6);
  const Graph g(3);
  const auto u = random_context(3, 2, rng);
  const auto p = SmpLayerParams::make_default(2, 4, 0, 1, rng);
  const auto& d = std::get<DefaultParams>(p.kind);
  const Tensor hat = equivariant_linear(u, p.equiv).data;
  const Tensor parts[] = {hat, Tensor::zeros({hat.rows(), hat.cols()})};
  CHECK(max_abs_diff(smp_default_layer(u, g, p).data.values(),
                     mlp_forward(concat_cols(parts), d.update).values()) < 1e-15);
}

TEST_CASE("sum propagation gives adjacency powers") {
  const auto u = sum_propagation_power(path_graph(3), 2);
  const std::vector<double> a2{1, 0, 1, 0, 2, 0, 1, 0, 1};
  CHECK(vec(u.data.values()) == a2);
  const Graph g = cycle_graph(5);
  const auto u1 = sum_propagation_power(g, 1);
  const auto a = g.adjacency_matrix();
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j) CHECK(u1.at(i, j, 0) == static_cast<double>(a(i, j)));
  const auto u3 = sum_propagation_power(cycle_graph(6), 3);
  for (std::size_t i = 0; i < 6; ++i) CHECK(u3.at(i, i, 0) == 0.0);
}

TEST_CASE("node pool: identity MLP on one-hot contexts") {
  const auto u = init_local_context(Graph(4));
  NodePoolParams p;
  p.mlp = linear(Tensor::identity(1));
  p.output = linear(Tensor::identity(3));
  const Tensor out = node_pool(u, p);
  REQUIRE(out.rows() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(out.at(i, 0) == 0.25);  // mean
    CHECK(out.at(i, 1) == 1.0);   // max
    CHECK(out.at(i, 2) == 1.0);   // owner row
  }
}

TEST_CASE("node pool: constant contexts give mean = max = owner") {
  LocalContext u = init_local_context(Graph(3)).with_data(Tensor::full({9, 1}, 0.7));
  NodePoolParams p;
  p.mlp = linear(Tensor::identity(1));
  p.output = linear(Tensor::identity(3));
  const Tensor out = node_pool(u, p);
  for (double v : out.values()) CHECK(v == doctest::Approx(0.7));
}

TEST_CASE("graph extract: trace and total sum of the one-hot tensor") {
  const auto u = init_local_context(Graph(5));
  const Tensor out = graph_extract(u, linear(Tensor::identity(2)));
  CHECK(vec(out.values()) == std::vector<double>{5, 5});
  Rng rng(2);
  auto mlp = MlpParams::init(mlp_dims(2, 4, 1, 1), rng);
  const auto zero = init_local_context(Graph(3)).with_data(Tensor::zeros({9, 1}));
  CHECK(graph_extract(zero, mlp).item() == mlp_forward(Tensor::zeros({1, 2}), mlp).item());
}

TEST_CASE("graph extract: invariant under relabelling") {
  Rng rng(8);
  const auto u = random_context(5, 2, rng);
  auto mlp = MlpParams::init(mlp_dims(4, 4, 1, 2), rng);
  const auto pu = permute_context(Permutation::random(5, rng), u);
  CHECK(max_abs_diff(graph_extract(u, mlp).values(), graph_extract(pu, mlp).values()) < 1e-12);
}

TEST_CASE("mpnn: constant features on a regular graph stay constant") {
  Rng rng(9);
  const Graph g = cycle_graph(7);
  const auto p = MpnnLayerParams::init(1, 4, 0, 2, rng);
  const Tensor x = mpnn_layer(init_node_states(g), g, p);
  for (std::size_t i = 1; i < 7; ++i)
    for (std::size_t k = 0; k < 4; ++k) CHECK(x.at(i, k) == x.at(0, k));
}

TEST_CASE("mpnn: edgeless graph updates with a zero aggregate") {
  Rng rng(10);
  const Graph g(3);
  const auto p = MpnnLayerParams::init(2, 3, 0, 1, rng);
  const Tensor x = Tensor({3, 2}, {1, 2, 3, 4, 5, 6});
  const Tensor parts[] = {x, Tensor::zeros({3, 3})};
  CHECK(max_abs_diff(mpnn_layer(x, g, p).values(), mlp_forward(concat_cols(parts), p.update).values()) == 0.0);
}

TEST_CASE("mpnn: C6 and two triangles give equal readouts") {
  CHECK(check_separation_mpnn(11, 10).passed);
  CHECK(check_separation_trace().passed);
}

TEST_CASE("lifting: zero layers leave the input features on the diagonal") {
  Rng rng(12);
  Graph g = random_graph(5, 0.5, rng);
  random_features(g, 2, 0, rng);
  const auto u = init_local_context(g);
  CHECK(max_abs_diff(lifted_states(u, 0).values(), init_node_states(g).values()) == 0.0);
  CHECK(lift_mpnn_to_smp({}, 5).empty());
}

TEST_CASE("lifting: lifted SMP reproduces the MPNN") {
  CHECK(check_lifting(13, 30).passed);
}

TEST_CASE("lifting: both sides commute with relabelling") {
  Rng rng(14);
  Graph g = random_graph(6, 0.5, rng);
  random_features(g, 1, 0, rng);
  const auto mp = MpnnLayerParams::init(2, 3, 0, 1, rng);
  const std::vector<MpnnLayerParams> layers{mp};
  const auto lifted = lift_mpnn_to_smp(layers, 6);
  const Permutation pi = Permutation::random(6, rng);
  const Graph h = permute_graph(pi, g);
  auto run = [&](const Graph& gg) { return lifted_states(smp_default_layer(init_local_context(gg), gg, lifted[0]), 1); };
  const auto a = permute_context(pi, node_vectors(run(g)));
  CHECK(max_abs_diff(a.data.values(), run(h).values()) < 1e-9);
  const auto b = permute_context(pi, node_vectors(mpnn_layer(init_node_states(g), g, mp)));
  CHECK(max_abs_diff(b.data.values(), mpnn_layer(init_node_states(h), h, mp).values()) < 1e-12);
}

TEST_CASE("equivariance and gradient suites pass; corrupted action fails by name") {
  for (const auto& r : verify_equivariance({})) CHECK_MESSAGE(r.passed, r.name);
  VerifyOptions bad;
  bad.corrupt_permutation = true;
  const auto res = verify_equivariance(bad);
  bool smp_fast_failed = false;
  for (const auto& r : res) smp_fast_failed |= (r.name == "equivariance.smp_fast" && !r.passed);
  CHECK(smp_fast_failed);
  for (const auto& r : verify_gradients(21, 3)) CHECK_MESSAGE(r.passed, r.name << ": " << r.detail);
}

TEST_CASE("layer inputs of the wrong width throw") {
  Rng rng(15);
  const auto p = SmpLayerParams::fast(3, 3, rng);
  CHECK_THROWS(smp_fast_layer(init_local_context(Graph(3)), Graph(3), p));
}
