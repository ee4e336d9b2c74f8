#include <doctest.h>

#include <sstream>

#include "smp/errors.hpp"
#include "smp/graph_algorithms.hpp"
#include "smp/permutation.hpp"
#include "smp/serialization.hpp"
#include "smp/verify.hpp"

using namespace smp;

namespace {

IntMatrix int_matrix(std::size_t n, std::initializer_list<std::int64_t> v) {
  IntMatrix m(n, n);
  m.data.assign(v.begin(), v.end());
  return m;
}

}  // namespace

TEST_CASE("graph: edges are canonical, duplicates collapse, self-loops rejected") {
  const Graph g(3, {{2, 0}, {1, 2}});
  CHECK(g.edges()[0].u == 0);
  CHECK(g.edges()[0].v == 2);
  CHECK(g.has_edge(2, 0));
  CHECK_THROWS(Graph(2, {{0, 0}}));
  CHECK(Graph(2, {{0, 1}, {1, 0}}).num_edges() == 1);
  CHECK_THROWS(Graph(2, {{0, 2}}));
}

TEST_CASE("permutation: identity leaves objects unchanged") {
  const Graph g = path_graph(4);
  CHECK(permute_graph(Permutation::identity(4), g) == g);
}

TEST_CASE("permutation: swapping K2 keeps its adjacency") {
  const Graph g = complete_graph(2);
  const auto a = g.adjacency_matrix();
  CHECK(permute_node_pairs(Permutation({1, 0}), a) == a);
}

TEST_CASE("permutation: cyclic shift moves rows forward") {
  RealMatrix x(3, 1);
  x.data = {10, 20, 30};  // a, b, c
  const auto y = permute_node_rows(Permutation({1, 2, 0}), x);
  CHECK(y.data == std::vector<double>{30, 10, 20});
}

TEST_CASE("permutation: rejects non-bijections and composes") {
  CHECK_THROWS_AS(Permutation({0, 0}), ContractError);
  const Permutation p({1, 2, 0});
  CHECK(compose(p, p.inverse()) == Permutation::identity(3));
}

TEST_CASE("permutation: edge features follow their edges") {
  Graph g(3, {{0, 1}, {1, 2}});
  g.set_edge_features(1, {5.0, 7.0});
  const Graph h = permute_graph(Permutation({2, 1, 0}), g);
  CHECK(h.edge_feature(*h.edge_index(2, 1))[0] == 5.0);
  CHECK(h.edge_feature(*h.edge_index(1, 0))[0] == 7.0);
}

TEST_CASE("shortest paths: P3") {
  const auto d = all_pairs_shortest_paths(path_graph(3));
  CHECK(d.data == std::vector<std::size_t>{0, 1, 2, 1, 0, 1, 2, 1, 0});
}

TEST_CASE("shortest paths: isolated nodes get the unreachable sentinel") {
  const auto d = all_pairs_shortest_paths(Graph(2));
  CHECK(d(0, 1) == 2);
  CHECK(d(1, 0) == 2);
  CHECK_FALSE(is_connected(Graph(2)));
}

TEST_CASE("shortest paths: K3") {
  const auto d = all_pairs_shortest_paths(complete_graph(3));
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(d(i, j) == (i == j ? 0u : 1u));
}

TEST_CASE("multitask targets on P3") {
  const std::vector<double> x{1, 1, 1};
  const auto t = multitask_targets(path_graph(3), 0, x);
  CHECK(t.dist == std::vector<double>{0, 1, 2});
  CHECK(t.ecc == std::vector<double>{2, 1, 2});
  CHECK(t.lap == std::vector<double>{0, 0, 0});
  CHECK(t.connected);
  CHECK(t.diameter == 2.0);
  CHECK(t.radius == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
}

TEST_CASE("spectral radius") {
  CHECK(spectral_radius(cycle_graph(6)) == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(spectral_radius_dense(cycle_graph(6)) == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(spectral_radius(complete_graph(2)) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(spectral_radius(Graph(4)) == 0.0);
  // K_{1,3}: sqrt(3); bipartite, so +-rho both occur.
  CHECK(spectral_radius_power(star_graph(3)).value == doctest::Approx(std::sqrt(3.0)).epsilon(1e-9));
}

TEST_CASE("cycle counts") {
  CHECK(count_k_cycles(cycle_graph(6), 6) == 1);
  CHECK(count_k_cycles(cycle_graph(6), 4) == 0);
  CHECK(count_k_cycles(complete_graph(3), 3) == 1);
  for (std::size_t k = 3; k <= 8; ++k) CHECK(count_k_cycles(Graph(8), k) == 0);
  CHECK(count_k_cycles(complete_graph(4), 4) == 3);
  CHECK(count_k_cycles(complete_graph(5), 5) == 12);
  CHECK(has_k_cycle(complete_graph(4), 3));
  CHECK_THROWS_AS(count_k_cycles(cycle_graph(4), 2), ArgumentError);
  CHECK_THROWS_AS(count_k_cycles(cycle_graph(4), 5), ArgumentError);
  const auto cycles = enumerate_k_cycles(complete_graph(4), 4);
  REQUIRE(cycles.size() == 3);
  CHECK(cycles[0] == std::vector<std::size_t>{0, 1, 2, 3});
}

TEST_CASE("trace of adjacency powers") {
  CHECK(trace_power(path_graph(5), 1) == 0);
  CHECK(trace_power(complete_graph(3), 3) == 6);
  CHECK(trace_power(cycle_graph(6), 3) == 0);
  CHECK(trace_power(disjoint_union(cycle_graph(3), cycle_graph(3)), 3) == 12);
  CHECK_THROWS_AS(trace_power(cycle_graph(3), 0), ArgumentError);
}

TEST_CASE("receptive field: P3 from node 0") {
  const Graph p3 = path_graph(3);
  CHECK(receptive_field(p3, 0, 1) == int_matrix(3, {0, 1, 0, 1, 0, 0, 0, 0, 0}));
  CHECK(receptive_field(p3, 0, 2) == p3.adjacency_matrix());
  const auto rec = receptive_field_recursion(p3, 1);
  CHECK(rec[0] == int_matrix(3, {0, 1, 0, 1, 0, 0, 0, 0, 0}));
  CHECK_THROWS_AS(receptive_field(p3, 0, 0), ArgumentError);
}

TEST_CASE("receptive field: unreachable nodes never enter") {
  // Two P2 components; from node 0 the far edge is unreachable at any depth.
  const Graph g(4, {{0, 1}, {2, 3}});
  for (std::size_t l = 1; l <= 5; ++l) CHECK(receptive_field(g, 0, l)(2, 3) == 0);
}

TEST_CASE("receptive field: depth diameter is not always the whole graph") {
  // In K3 the edge opposite node 0 has both ends at distance 1 = diameter,
  // so it only appears one layer later. Bipartite graphs reach A at the
  // diameter itself.
  const Graph k3 = complete_graph(3);
  CHECK(receptive_field(k3, 0, 1)(1, 2) == 0);
  CHECK(receptive_field_recursion(k3, 1)[0](1, 2) == 0);
  CHECK(receptive_field_recursion(k3, 2)[0] == k3.adjacency_matrix());
  for (const auto& u : receptive_field_recursion(path_graph(5), 4)) CHECK(u == path_graph(5).adjacency_matrix());
  for (const auto& u : receptive_field_recursion(cycle_graph(6), 3)) CHECK(u == cycle_graph(6).adjacency_matrix());
}

TEST_CASE("receptive field: recursion equals the direct definition") {
  CHECK(check_receptive_field_random(3, 300).passed);
  CHECK(check_receptive_field_exhaustive(5).passed);
}

TEST_CASE("graph json: round trip and canonicalization") {
  Graph g(3, {{0, 1}, {1, 2}});
  g.set_node_features(1, {0.5, -1, 2});
  g.set_edge_features(2, {1, 2, 3, 4});
  CHECK(graph_from_json(graph_to_json(g)) == g);
  const auto h = graph_from_json(nlohmann::json::parse(R"({"n":3,"edges":[[2,1]]})"));
  CHECK(h.edges()[0].u == 1);
  CHECK(h.edges()[0].v == 2);
  CHECK_THROWS_AS(graph_from_json(nlohmann::json::parse(R"({"n":3})")), ParseError);
  CHECK_THROWS_AS(graph_from_json(nlohmann::json::parse(R"({"n":3,"edges":[[1,1]]})")), ParseError);
  CHECK_THROWS_AS(graph_from_json(nlohmann::json::parse(R"({"n":2,"edges":[[0,5]]})")), ParseError);
}

TEST_CASE("oracle checks used by the verify suite pass") {
  CHECK(check_trace_triangles(5).passed);
  CHECK(check_spectral_radius(5).passed);
  CHECK(check_cycle_counts(5).passed);
  CHECK(check_powers_of_adjacency(5, 100).passed);
}
