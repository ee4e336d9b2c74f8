#include <doctest.h>

#include "smp/coloring.hpp"
#include "smp/errors.hpp"
#include "smp/verify.hpp"

using namespace smp;

TEST_CASE("coloring: single node") {
  for (std::size_t L = 1; L <= 3; ++L) {
    const auto ca = color_nodes(Graph(1), L);
    CHECK(ca.colors == std::vector<std::size_t>{0});
    CHECK(ca.chi == 1);
  }
}

TEST_CASE("coloring: P5 with L = 1 by hand") {
  const auto ca = color_nodes(path_graph(5), 1);
  CHECK(ca.colors == std::vector<std::size_t>{0, 1, 2, 0, 1});
  CHECK(ca.chi == 3);
  CHECK(is_valid_coloring(path_graph(5), ca));
}

TEST_CASE("coloring: star K1,3 needs four colors") {
  CHECK(color_nodes(star_graph(3), 1).chi == 4);
}

TEST_CASE("coloring: components may reuse colors") {
  const Graph g(4, {{0, 1}, {2, 3}});
  const auto ca = color_nodes(g, 1);
  CHECK(ca.chi == 2);
  const auto u = init_colored_context(g, ca);
  CHECK(u.rows == 2);
}

TEST_CASE("colored context: P5 blocks have chi rows, owner on its color row") {
  const Graph g = path_graph(5);
  const auto ca = color_nodes(g, 1);
  const auto u = init_colored_context(g, ca);
  CHECK(u.rows == 3);
  CHECK(u.data.rows() == 15);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(u.owner_rows[i] == ca.colors[i]);
    for (std::size_t r = 0; r < 3; ++r) CHECK(u.at(i, r, 0) == (r == ca.colors[i] ? 1.0 : 0.0));
  }
}

TEST_CASE("coloring: invalid assignments are rejected") {
  const Graph g = path_graph(3);
  ColorAssignment bad{{0, 1, 0}, 2, 1};  // nodes 0 and 2 are at distance 2
  CHECK_FALSE(is_valid_coloring(g, bad));
  CHECK_THROWS_AS(init_colored_context(g, bad), ContractError);
  CHECK_THROWS_AS(color_nodes(g, 0), ArgumentError);
}

TEST_CASE("coloring: validity, distinct-color reduction and monotonicity") {
  CHECK(check_coloring_validity(4, 200).passed);
  CHECK(check_coloring_reduction(4).passed);
  CHECK(check_coloring_monotone(4).passed);
}
