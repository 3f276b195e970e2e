#include "telab/ad/optimizer.hpp"

#include <cmath>

#include "telab/common/error.hpp"

namespace telab::ad {

void optimizer_step(ParameterSet& params, AdamState& state) {
  const auto entries = params.entries();
  if (state.m.empty()) {
    for (const auto& p : entries) {
      state.m.emplace_back(p.tensor.size(), 0.0);
      state.v.emplace_back(p.tensor.size(), 0.0);
    }
  }
  if (state.m.size() != entries.size()) throw ShapeError("optimizer state does not match parameters");
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double c1 = 1.0 - std::pow(state.beta1, t);
  const double c2 = 1.0 - std::pow(state.beta2, t);
  for (std::size_t i = 0; i < entries.size(); ++i) {
    Tensor w = entries[i].tensor;
    if (params.is_frozen(entries[i].group)) continue;
    auto& m = state.m[i];
    auto& v = state.v[i];
    if (m.size() != w.size()) throw ShapeError("optimizer moment size mismatch for " + entries[i].name);
    const auto g = w.grad();
    auto x = w.mutable_values();
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double gj = g.empty() ? 0.0 : g[j];
      m[j] = state.beta1 * m[j] + (1.0 - state.beta1) * gj;
      v[j] = state.beta2 * v[j] + (1.0 - state.beta2) * gj * gj;
      x[j] -= state.lr * (m[j] / c1) / (std::sqrt(v[j] / c2) + state.eps);
    }
  }
  params.zero_grad();
}

}  // namespace telab::ad
