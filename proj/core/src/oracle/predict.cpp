#include "telab/oracle/predict.hpp"

#include "telab/common/error.hpp"

namespace telab::oracle {

net::TrafficMatrix predict_wma(std::span<const net::TrafficMatrix> history, double decay) {
  if (history.empty()) throw ValidationError("prediction needs a nonempty history");
  if (!(decay > 0.0 && decay <= 1.0)) throw ValidationError("decay must lie in (0, 1]");
  const std::size_t n = history.front().node_count();
  net::TrafficMatrix out(n);
  auto acc = out.values();
  double weight = 1.0;
  double total = 0.0;
  for (std::size_t back = 0; back < history.size(); ++back) {
    const auto& m = history[history.size() - 1 - back];
    if (m.node_count() != n) throw ShapeError("history mixes matrix dimensions");
    const auto v = m.values();
    for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += weight * v[k];
    total += weight;
    weight *= decay;
  }
  for (double& x : acc) x /= total;
  return out;
}

}  // namespace telab::oracle
