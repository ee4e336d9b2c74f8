#include "smp/gradcheck.hpp"

#include <algorithm>
#include <cmath>

#include "smp/errors.hpp"

namespace smp {

namespace {

struct Evaluation {
  double value;
  std::uint64_t kinks;
};

Evaluation evaluate(const std::function<Tensor()>& f) {
  NoGradGuard guard;
  KinkRecorder recorder;
  const double v = f().item();
  if (!std::isfinite(v)) throw GradCheckError("objective is not finite");
  return {v, recorder.digest()};
}

}  // namespace

GradCheckResult finite_difference_check(const std::function<Tensor()>& f,
                                        std::span<const NamedParam> params,
                                        double h) {
  if (!(h > 0.0)) throw ArgumentError("finite difference step must be positive");
  for (const auto& p : params) Tensor(p.tensor).zero_grad();

  std::uint64_t base_kinks = 0;
  Tensor loss;
  {
    KinkRecorder recorder;
    loss = f();
    base_kinks = recorder.digest();
  }
  if (!std::isfinite(loss.item())) throw GradCheckError("objective is not finite");
  backprop(loss);

  GradCheckResult result;
  for (const auto& p : params) {
    Tensor t = p.tensor;
    const auto analytic = t.grad_or_zeros();
    auto values = t.mutable_values();
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double original = values[i];
      values[i] = original + h;
      const auto up = evaluate(f);
      values[i] = original - h;
      const auto down = evaluate(f);
      values[i] = original;

      ++result.entries;
      // A step across a ReLU or max switch measures the jump, not the slope.
      if (up.kinks != base_kinks || down.kinks != base_kinks) {
        ++result.skipped_kinks;
        continue;
      }
      const double numeric = (up.value - down.value) / (2.0 * h);
      const double denom = std::max({std::abs(analytic[i]), std::abs(numeric), 1e-8});
      const double err = std::abs(analytic[i] - numeric) / denom;
      if (err > result.max_relative_error) {
        result.max_relative_error = err;
        result.worst_param = p.name;
        result.worst_index = i;
        result.worst_analytic = analytic[i];
        result.worst_numeric = numeric;
      }
    }
    t.zero_grad();
  }
  return result;
}

}  // namespace smp
