#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "smp/datasets.hpp"
#include "smp/errors.hpp"

using namespace smp;

namespace {

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("smp_unit_" + name);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("cycle dataset: balanced, labels recheck, pairs share edge counts") {
  const auto ds = generate_cycle_dataset(4, 12, 10, 1);
  REQUIRE(ds.records.size() == 10);
  int pos = 0;
  for (const auto& r : ds.records) pos += r.label;
  CHECK(pos == 5);
  CHECK_FALSE(check_labels(ds).has_value());
  for (std::size_t i = 0; i + 1 < ds.records.size(); i += 2) {
    CHECK(ds.records[i].label == 1);
    CHECK(ds.records[i + 1].label == 0);
    CHECK(ds.records[i].graph.num_edges() == ds.records[i + 1].graph.num_edges());
  }
  for (const auto& r : ds.records) CHECK(r.graph.n() == 12);
}

TEST_CASE("cycle dataset: other lengths and bad arguments") {
  const auto ds = generate_cycle_dataset(6, 14, 20, 2);
  CHECK_FALSE(check_labels(ds).has_value());
  CHECK_THROWS(generate_cycle_dataset(2, 10, 4, 0));
  CHECK_THROWS(generate_cycle_dataset(8, 6, 4, 0));
}

TEST_CASE("cycle dataset: same arguments give byte-identical files") {
  const auto a = temp_file("a.jsonl"), b = temp_file("b.jsonl");
  write_dataset(a.string(), generate_cycle_dataset(4, 12, 30, 9));
  write_dataset(b.string(), generate_cycle_dataset(4, 12, 30, 9));
  CHECK(slurp(a) == slurp(b));
  CHECK(slurp(a) != "");
  write_dataset(b.string(), generate_cycle_dataset(4, 12, 30, 10));
  CHECK(slurp(a) != slurp(b));
  for (const auto& p : {a, b}) {
    std::filesystem::remove(p);
    std::filesystem::remove(p.string() + ".meta.json");
  }
}

TEST_CASE("multitask dataset: sizes, features and oracle labels") {
  const auto ds = generate_multitask_dataset(40, 5, 5, 3);
  REQUIRE(ds.records.size() == 40);
  for (const auto& r : ds.records) {
    CHECK(r.graph.n() == 5);
    CHECK(r.graph.node_feature_dim() == 2);
    CHECK(r.graph.node_feature(r.source)[0] == 1.0);
  }
  CHECK_FALSE(check_labels(ds).has_value());
  const auto wide = generate_multitask_dataset(60, 5, 24, 4);
  std::size_t lo = 100, hi = 0;
  for (const auto& r : wide.records) {
    lo = std::min(lo, r.graph.n());
    hi = std::max(hi, r.graph.n());
  }
  CHECK(lo >= 5);
  CHECK(hi <= 24);
  CHECK(hi > lo);
}

TEST_CASE("dataset io: round trip is the identity") {
  const auto p = temp_file("rt.jsonl");
  for (const auto& ds : {generate_cycle_dataset(5, 10, 8, 5), generate_multitask_dataset(8, 4, 9, 5)}) {
    write_dataset(p.string(), ds);
    CHECK(read_dataset(p.string()) == ds);
  }
  std::filesystem::remove(p);
  std::filesystem::remove(p.string() + ".meta.json");
}

TEST_CASE("dataset io: parse errors name the line; reversed edges are normalized") {
  const auto p = temp_file("bad.jsonl");
  {
    std::ofstream out(p);
    out << R"({"n":3,"edges":[[2,1]],"x":null,"y":null,"label":0})" << '\n';
    out << R"({"n":3,"label":0})" << '\n';
  }
  try {
    (void)read_dataset(p.string());
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find(":2:") != std::string::npos);
  }
  {
    std::ofstream out(p);
    out << R"({"n":3,"edges":[[2,1]],"x":null,"y":null,"label":0})" << '\n';
  }
  const auto ds = read_dataset(p.string());
  REQUIRE(ds.records.size() == 1);
  CHECK(ds.records[0].graph.edges()[0].u == 1);
  CHECK(ds.records[0].graph.edges()[0].v == 2);
  CHECK_THROWS_AS(read_dataset(temp_file("does_not_exist.jsonl").string()), ConfigError);
  std::filesystem::remove(p);
}
