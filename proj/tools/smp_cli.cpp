// Command-line front end: generate, train, evaluate, verify, bench.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <json.hpp>

#include "smp/bench.hpp"
#include "smp/config.hpp"
#include "smp/datasets.hpp"
#include "smp/errors.hpp"
#include "smp/trainer.hpp"
#include "smp/verify.hpp"

namespace {

constexpr int kCheckFailure = 1;
constexpr int kUsageError = 2;

// Leftover `--key value` / `--key=value` arguments become config overrides.
void apply_overrides(smp::RunConfig& cfg, std::vector<std::string> extras) {
  for (std::size_t i = 0; i < extras.size(); ++i) {
    std::string arg = extras[i];
    if (arg.rfind("--", 0) != 0) throw smp::ConfigError("unexpected argument '" + arg + "'");
    arg = arg.substr(2);
    if (auto eq = arg.find('='); eq != std::string::npos) {
      cfg.set(arg.substr(0, eq), arg.substr(eq + 1));
      continue;
    }
    if (i + 1 >= extras.size()) throw smp::ConfigError("missing value for --" + arg);
    cfg.set(arg, extras[++i]);
  }
}

void print_report(const smp::MetricsReport& report) { std::cout << report.to_json().dump(2) << '\n'; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Structural message-passing graph networks"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "Write a synthetic dataset");
  std::string gen_task = "cycles", gen_out;
  std::size_t gen_k = 4, gen_n = 12, gen_count = 1000, gen_n_min = 5, gen_n_max = 24;
  std::uint64_t gen_seed = 0;
  gen->add_option("--task", gen_task, "cycles | multitask")->check(CLI::IsMember({"cycles", "multitask"}));
  gen->add_option("--k", gen_k, "Cycle length");
  gen->add_option("--n", gen_n, "Nodes per graph (cycles)");
  gen->add_option("--count", gen_count, "Number of graphs");
  gen->add_option("--n-min", gen_n_min, "Smallest graph (multitask)");
  gen->add_option("--n-max", gen_n_max, "Largest graph (multitask)");
  gen->add_option("--seed", gen_seed);
  gen->add_option("--out", gen_out, "Output .jsonl path")->required();

  // train
  auto* tr = app.add_subcommand("train", "Train a model; extra --key value pairs override the config");
  std::string tr_config;
  tr->add_option("--config", tr_config, "key = value config file")->check(CLI::ExistingFile);
  tr->allow_extras();

  // evaluate
  auto* ev = app.add_subcommand("evaluate", "Score a checkpoint on a dataset");
  std::string ev_ckpt, ev_data;
  ev->add_option("--checkpoint", ev_ckpt)->required();
  ev->add_option("--dataset", ev_data)->required();

  // verify
  auto* ver = app.add_subcommand("verify", "Run property checks");
  std::string ver_suite = "all";
  smp::VerifyOptions ver_opts;
  ver->add_option("suite", ver_suite, "equivariance | oracles | separation | gradients | all");
  ver->add_option("--seed", ver_opts.seed);
  ver->add_flag("--corrupt-permutation", ver_opts.corrupt_permutation,
                "Negative control: break the output-side permutation");

  // bench
  auto* be = app.add_subcommand("bench", "Per-layer forward timings as CSV");
  smp::BenchOptions be_opts;
  std::string be_out;
  be->add_option("--sizes", be_opts.sizes)->delimiter(',');
  be->add_option("--degrees", be_opts.degrees, "Average degrees")->delimiter(',');
  be->add_option("--width", be_opts.width);
  be->add_option("--repeats", be_opts.repeats);
  be->add_option("--seed", be_opts.seed);
  be->add_option("--out", be_out, "CSV path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  try {
    if (*gen) {
      const auto ds = gen_task == "cycles"
                          ? smp::generate_cycle_dataset(gen_k, gen_n, gen_count, gen_seed)
                          : smp::generate_multitask_dataset(gen_count, gen_n_min, gen_n_max, gen_seed);
      smp::write_dataset(gen_out, ds);
      std::cout << "wrote " << ds.records.size() << " graphs to " << gen_out << '\n';
      return 0;
    }
    if (*tr) {
      smp::RunConfig cfg = tr_config.empty() ? smp::RunConfig{} : smp::RunConfig::from_file(tr_config);
      apply_overrides(cfg, tr->remaining());
      print_report(smp::train(cfg));
      return 0;
    }
    if (*ev) {
      print_report(smp::evaluate(ev_ckpt, ev_data));
      return 0;
    }
    if (*ver) {
      const auto results = smp::run_verify(ver_suite, ver_opts);
      bool ok = true;
      for (const auto& r : results) {
        std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << "  (" << r.detail << ", "
                  << r.seconds << " s)\n";
        ok = ok && r.passed;
      }
      std::cout << (ok ? "all checks passed\n" : "some checks FAILED\n");
      return ok ? 0 : kCheckFailure;
    }
    if (*be) {
      const auto rows = smp::run_bench(be_opts);
      if (be_out.empty()) {
        smp::write_bench_csv(std::cout, rows);
      } else {
        std::ofstream os(be_out);
        if (!os) throw smp::ConfigError("cannot write " + be_out);
        smp::write_bench_csv(os, rows);
      }
      return 0;
    }
  } catch (const smp::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kUsageError;
  } catch (const smp::ArgumentError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsageError;
  } catch (const smp::ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kUsageError;
  } catch (const smp::CheckpointError& e) {
    std::cerr << "checkpoint error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kCheckFailure;
  }
  return kUsageError;
}
