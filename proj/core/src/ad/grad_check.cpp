#include "telab/ad/grad_check.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace telab::ad {

GradCheckResult grad_check(const std::function<Tensor()>& f, std::span<Tensor> inputs,
                           const GradCheckOptions& options) {
  GradCheckResult result;
  for (Tensor& t : inputs) t.zero_grad();
  const Tensor loss = f();
  result.unreliable = min_kink_margin(loss) < 2.0 * options.eps;
  backward(loss);
  std::vector<std::vector<double>> analytic;
  for (Tensor& t : inputs) {
    const auto g = t.grad();
    analytic.emplace_back(t.size(), 0.0);
    if (!g.empty()) std::copy(g.begin(), g.end(), analytic.back().begin());
    t.zero_grad();
  }

  NoGradGuard guard;
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    Tensor& t = inputs[k];
    const std::size_t n = t.size();
    const std::size_t stride =
        options.max_components == 0 || n <= options.max_components ? 1 : n / options.max_components;
    for (std::size_t i = 0; i < n; i += stride) {
      auto x = t.mutable_values();
      const double saved = x[i];
      x[i] = saved + options.eps;
      const double up = f().item();
      x[i] = saved - options.eps;
      const double down = f().item();
      x[i] = saved;
      const double numeric = (up - down) / (2.0 * options.eps);
      const double a = analytic[k][i];
      const double denom = std::max({std::abs(a), std::abs(numeric), options.denominator_floor});
      result.max_rel_error = std::max(result.max_rel_error, std::abs(a - numeric) / denom);
      ++result.components;
    }
  }
  return result;
}

}  // namespace telab::ad
