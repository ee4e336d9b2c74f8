#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "smp/bench.hpp"
#include "smp/config.hpp"
#include "smp/datasets.hpp"
#include "smp/errors.hpp"
#include "smp/trainer.hpp"
#include "smp/verify.hpp"

using namespace smp;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("smp_harness_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

RunConfig small_cycles_config(const fs::path& dir) {
  write_dataset((dir / "train.jsonl").string(), generate_cycle_dataset(4, 8, 60, 1));
  write_dataset((dir / "test.jsonl").string(), generate_cycle_dataset(4, 8, 20, 2));
  RunConfig cfg;
  cfg.train = (dir / "train.jsonl").string();
  cfg.test = (dir / "test.jsonl").string();
  cfg.out = (dir / "run").string();
  cfg.layers = 2;
  cfg.width = 6;
  cfg.hidden_layers = 1;
  cfg.epochs = 3;
  cfg.batch_size = 8;
  cfg.seed = 5;
  return cfg;
}

}  // namespace

TEST_CASE("config: keys, overrides, file format and validation") {
  RunConfig cfg;
  cfg.set("batch-size", "32");
  cfg.set("lr", "0.01");
  cfg.set("model", "mpnn");
  CHECK(cfg.batch_size == 32);
  CHECK(cfg.lr == 0.01);
  CHECK_THROWS_AS(cfg.set("nope", "1"), ConfigError);
  CHECK_THROWS_AS(cfg.set("width", "wide"), ConfigError);
  CHECK_THROWS_AS(cfg.set("width", "-3"), ConfigError);

  const auto dir = scratch("config");
  {
    std::ofstream out(dir / "run.cfg");
    out << "# comment\ntask = multitask\nwidth = 8  # trailing\n\nlayers=3\n";
  }
  const auto f = RunConfig::from_file((dir / "run.cfg").string());
  CHECK(f.task == "multitask");
  CHECK(f.width == 8);
  CHECK(f.layers == 3);
  {
    std::ofstream out(dir / "bad.cfg");
    out << "width 8\n";
  }
  CHECK_THROWS_AS(RunConfig::from_file((dir / "bad.cfg").string()), ConfigError);

  RunConfig v;
  v.width = 0;
  CHECK_THROWS_AS(v.validate(false), ConfigError);
  RunConfig missing;
  missing.train = (dir / "absent.jsonl").string();
  missing.test = missing.train;
  CHECK_THROWS_AS(missing.validate(true), ConfigError);
  CHECK(RunConfig{}.hash() == RunConfig{}.hash());
  CHECK(RunConfig{}.hash() != f.hash());
}

TEST_CASE("train: writes outputs, is deterministic, evaluate reproduces the test metric") {
  const auto dir = scratch("train");
  RunConfig cfg = small_cycles_config(dir);
  const auto a = train(cfg);
  CHECK(fs::exists(fs::path(cfg.out) / "metrics.csv"));
  CHECK(fs::exists(fs::path(cfg.out) / "report.json"));
  CHECK(fs::exists(fs::path(cfg.out) / "model.ckpt"));
  CHECK(a.train_loss.size() == 3);
  for (double l : a.train_loss) CHECK(std::isfinite(l));
  CHECK(a.test.accuracy >= 0.0);
  CHECK(a.test.accuracy <= 1.0);

  cfg.out = (dir / "run2").string();
  const auto b = train(cfg);
  CHECK(a.train_loss == b.train_loss);
  CHECK(a.test.accuracy == b.test.accuracy);
  CHECK(a.test.loss == b.test.loss);

  const auto ckpt = (fs::path(cfg.out) / "model.ckpt").string();
  const auto before = fs::last_write_time(ckpt);
  const auto e = evaluate(ckpt, cfg.test);
  CHECK(e.test.accuracy == b.test.accuracy);
  CHECK(e.test.loss == b.test.loss);
  CHECK(fs::last_write_time(ckpt) == before);

  // A larger graph size than seen in training.
  write_dataset((dir / "big.jsonl").string(), generate_cycle_dataset(4, 14, 10, 3));
  const auto big = evaluate(ckpt, (dir / "big.jsonl").string());
  CHECK(big.test.graphs == 10);
  CHECK(std::isfinite(big.test.loss));
}

TEST_CASE("train and evaluate: error paths") {
  const auto dir = scratch("errors");
  RunConfig cfg = small_cycles_config(dir);
  cfg.epochs = 1;
  (void)train(cfg);
  const auto ckpt = (fs::path(cfg.out) / "model.ckpt").string();

  Dataset empty{"cycles", 4, 0, nlohmann::json::object(), {}};
  write_dataset((dir / "empty.jsonl").string(), empty);
  CHECK_THROWS_AS(evaluate(ckpt, (dir / "empty.jsonl").string()), ConfigError);

  write_dataset((dir / "mt.jsonl").string(), generate_multitask_dataset(4, 5, 6, 1));
  CHECK_THROWS_AS(evaluate(ckpt, (dir / "mt.jsonl").string()), CheckpointError);

  // Node features of a width the model was not built for.
  Dataset wide = generate_cycle_dataset(4, 8, 4, 1);
  for (auto& r : wide.records) r.graph.set_node_features(1, std::vector<double>(r.graph.n(), 0.5));
  write_dataset((dir / "wide.jsonl").string(), wide);
  CHECK_THROWS_AS(evaluate(ckpt, (dir / "wide.jsonl").string()), CheckpointError);

  RunConfig no_files;
  no_files.train = (dir / "nope.jsonl").string();
  no_files.test = no_files.train;
  CHECK_THROWS_AS(train(no_files), ConfigError);
}

TEST_CASE("train: mpnn cannot separate C6 from two triangles") {
  const auto dir = scratch("mpnn_pair");
  Dataset ds{"cycles", 6, 0, nlohmann::json::object(), {}};
  for (int i = 0; i < 20; ++i) {
    ds.records.push_back({cycle_graph(6), 1, 0, {}});
    ds.records.push_back({disjoint_union(cycle_graph(3), cycle_graph(3)), 0, 0, {}});
  }
  REQUIRE_FALSE(check_labels(ds).has_value());
  write_dataset((dir / "pairs.jsonl").string(), ds);
  RunConfig cfg;
  cfg.model = "mpnn";
  cfg.train = cfg.test = (dir / "pairs.jsonl").string();
  cfg.out = (dir / "run").string();
  cfg.layers = 3;
  cfg.width = 8;
  cfg.epochs = 10;
  cfg.lr = 1e-2;
  const auto rep = train(cfg);
  CHECK(rep.test.accuracy <= 0.5 + 1e-12);

  cfg.model = "smp-fast";
  cfg.out = (dir / "run_smp").string();
  cfg.lr = 1e-3;
  cfg.epochs = 60;
  CHECK(train(cfg).test.accuracy > 0.9);
}

TEST_CASE("train: multitask runs end to end with finite log-MSE") {
  const auto dir = scratch("multitask");
  write_dataset((dir / "train.jsonl").string(), generate_multitask_dataset(40, 5, 10, 1));
  write_dataset((dir / "test.jsonl").string(), generate_multitask_dataset(10, 5, 8, 2));
  for (const char* model : {"smp-default", "mpnn"}) {
    RunConfig cfg;
    cfg.task = "multitask";
    cfg.model = model;
    cfg.train = (dir / "train.jsonl").string();
    cfg.test = (dir / "test.jsonl").string();
    cfg.out = (dir / model).string();
    cfg.layers = 2;
    cfg.width = 6;
    cfg.hidden_layers = 1;
    cfg.epochs = 2;
    const auto rep = train(cfg);
    for (double v : rep.test.log10_mse) CHECK(std::isfinite(v));
    CHECK(std::isfinite(rep.test.mean_log10_mse));
    CHECK(std::isfinite(rep.test.subset_log10_mse));
    const auto e = evaluate((fs::path(cfg.out) / "model.ckpt").string(), cfg.test);
    CHECK(e.test.mean_log10_mse == rep.test.mean_log10_mse);
  }
}

TEST_CASE("train: colored contexts") {
  const auto dir = scratch("colored");
  RunConfig cfg = small_cycles_config(dir);
  cfg.coloring = 1;
  cfg.epochs = 1;
  const auto rep = train(cfg);
  CHECK(std::isfinite(rep.test.loss));
  const auto e = evaluate((fs::path(cfg.out) / "model.ckpt").string(), cfg.test);
  CHECK(e.test.loss == rep.test.loss);
}

TEST_CASE("verify: unknown suite is an argument error; separation suite passes") {
  CHECK_THROWS_AS(run_verify("nope"), ArgumentError);
  for (const auto& r : run_verify("separation")) CHECK_MESSAGE(r.passed, r.name);
}

TEST_CASE("bench: rows, csv and exponent fit") {
  BenchOptions opts;
  opts.sizes = {8, 16};
  opts.repeats = 3;
  opts.width = 4;
  const auto rows = run_bench(opts);
  CHECK(rows.size() == 6);
  std::ostringstream os;
  write_bench_csv(os, rows);
  CHECK(os.str().rfind("variant,n,m,c,median_us\n", 0) == 0);
  const std::vector<BenchRow> synthetic{{"x", 10, 20, 4, 100.0}, {"x", 20, 40, 4, 400.0},
                                        {"x", 40, 80, 4, 1600.0}};
  CHECK(fitted_exponent(synthetic, "x") == doctest::Approx(2.0));
  CHECK_THROWS_AS(fitted_exponent(synthetic, "y"), ArgumentError);
}
