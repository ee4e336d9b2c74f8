#include "smp/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>

#include "smp/context.hpp"
#include "smp/errors.hpp"
#include "smp/layers.hpp"
#include "smp/ops.hpp"
#include "smp/verify.hpp"

namespace smp {

namespace {

Graph random_gnm(std::size_t n, std::size_t m, Rng& rng) {
  std::vector<std::pair<std::size_t, std::size_t>> all;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) all.emplace_back(i, j);
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(std::min(m, all.size()));
  return Graph(n, all);
}

template <typename F>
double median_us(std::size_t repeats, F&& body) {
  body();  // warm-up
  std::vector<double> t(repeats);
  for (auto& v : t) {
    const auto t0 = std::chrono::steady_clock::now();
    body();
    v = std::chrono::duration<double, std::micro>(std::chrono::steady_clock::now() - t0).count();
  }
  std::nth_element(t.begin(), t.begin() + t.size() / 2, t.end());
  return t[t.size() / 2];
}

}  // namespace

std::vector<BenchRow> run_bench(const BenchOptions& opts) {
  if (opts.width == 0 || opts.repeats == 0) throw ArgumentError("bench needs width and repeats >= 1");
  Rng rng(opts.seed);
  NoGradGuard no_grad;
  std::vector<BenchRow> rows;
  const std::size_t c = opts.width;
  for (double degree : opts.degrees) {
    for (std::size_t n : opts.sizes) {
      const auto m = static_cast<std::size_t>(std::llround(static_cast<double>(n) * degree / 2.0));
      const Graph g = random_gnm(n, m, rng);
      const LocalContext u = random_context(n, c, rng);
      const Tensor x = gather_rows(u.data, u.owner_flat());

      const auto mp = MpnnLayerParams::init(c, c, 0, 1, rng);
      const auto fast = SmpLayerParams::fast(c, c, rng);
      const auto def = SmpLayerParams::make_default(c, c, 0, 1, rng);
      rows.push_back({"mpnn", n, g.num_edges(), c,
                      median_us(opts.repeats, [&] { (void)mpnn_layer(x, g, mp); })});
      rows.push_back({"smp-fast", n, g.num_edges(), c,
                      median_us(opts.repeats, [&] { (void)smp_fast_layer(u, g, fast); })});
      rows.push_back({"smp-default", n, g.num_edges(), c,
                      median_us(opts.repeats, [&] { (void)smp_default_layer(u, g, def); })});
    }
  }
  return rows;
}

void write_bench_csv(std::ostream& os, const std::vector<BenchRow>& rows) {
  os << "variant,n,m,c,median_us\n";
  for (const auto& r : rows) {
    os << r.variant << ',' << r.n << ',' << r.m << ',' << r.c << ',' << r.median_us << '\n';
  }
}

double fitted_exponent(const std::vector<BenchRow>& rows, const std::string& variant) {
  std::vector<std::pair<double, double>> pts;
  double ratio = -1.0;
  for (const auto& r : rows) {
    if (r.variant != variant || r.n == 0 || r.median_us <= 0.0) continue;
    const double rr = static_cast<double>(r.m) / static_cast<double>(r.n);
    if (ratio < 0.0) ratio = rr;
    if (std::abs(rr - ratio) > 0.25) continue;
    pts.emplace_back(std::log(static_cast<double>(r.n)), std::log(r.median_us));
  }
  if (pts.size() < 2) throw ArgumentError("need two sizes to fit an exponent for " + variant);
  double mx = 0.0, my = 0.0;
  for (auto [a, b] : pts) {
    mx += a;
    my += b;
  }
  mx /= pts.size();
  my /= pts.size();
  double sxy = 0.0, sxx = 0.0;
  for (auto [a, b] : pts) {
    sxy += (a - mx) * (b - my);
    sxx += (a - mx) * (a - mx);
  }
  return sxy / sxx;
}

}  // namespace smp
