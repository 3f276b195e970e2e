#pragma once

#include <cstddef>
#include <functional>
#include <span>

#include "telab/ad/tensor.hpp"

namespace telab::ad {

struct GradCheckOptions {
  double eps = 1e-6;
  // Relative errors use max(|analytic|, |numeric|, denominator_floor).
  double denominator_floor = 1e-3;
  // Check at most this many components per tensor (evenly strided); 0 = all.
  std::size_t max_components = 0;
};

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::size_t components = 0;
  // The expression passed within 2*eps of a relu kink or reduce_max tie, so
  // the central difference may straddle a nondifferentiable point.
  bool unreliable = false;
};

// Compares backward() gradients of the scalar f() against central
// differences for every component of `inputs`. f must rebuild its graph
// from the inputs on every call. Gradients of `inputs` are left zeroed.
GradCheckResult grad_check(const std::function<Tensor()>& f, std::span<Tensor> inputs,
                           const GradCheckOptions& options = {});

}  // namespace telab::ad
