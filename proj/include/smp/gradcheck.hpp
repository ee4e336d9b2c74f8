#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>

#include "smp/params.hpp"
#include "smp/tensor.hpp"

namespace smp {

struct GradCheckResult {
  double max_relative_error = 0.0;
  std::string worst_param;
  std::size_t worst_index = 0;
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
  std::size_t entries = 0;
  // Entries whose +-h evaluations crossed a ReLU or max switch; their
  // central difference is not a derivative estimate and is not scored.
  std::size_t skipped_kinks = 0;
};

/// Compares autodiff gradients of the scalar `f` with central differences
/// (f(t+h) - f(t-h)) / 2h for every entry of every parameter. Relative error
/// uses max(|analytic|, |numeric|, 1e-8) as denominator. Entries whose
/// perturbed evaluations take a different branch at some kink are skipped. Parameter gradients
/// are cleared before and after. Throws GradCheckError if f is not finite.
GradCheckResult finite_difference_check(const std::function<Tensor()>& f,
                                        std::span<const NamedParam> params,
                                        double h = 1e-5);

}  // namespace smp
