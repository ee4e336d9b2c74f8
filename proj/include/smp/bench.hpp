#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace smp {

struct BenchOptions {
  std::vector<std::size_t> sizes = {16, 32, 64};
  std::vector<double> degrees = {4.0};  // average degree; m = round(n * d / 2)
  std::size_t width = 16;
  std::size_t repeats = 21;
  std::uint64_t seed = 0;
};

struct BenchRow {
  std::string variant;  // "mpnn", "smp-fast" or "smp-default"
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t c = 0;
  double median_us = 0.0;
};

/// Median wall-clock of one layer forward pass (no gradient recording) for
/// each variant, size and degree.
std::vector<BenchRow> run_bench(const BenchOptions& opts = {});
void write_bench_csv(std::ostream& os, const std::vector<BenchRow>& rows);

/// Least-squares slope of log(median_us) against log(n) for one variant at
/// one edge density (rows sharing the m/n ratio of the first match).
double fitted_exponent(const std::vector<BenchRow>& rows, const std::string& variant);

}  // namespace smp
