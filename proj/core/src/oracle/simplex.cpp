#include "telab/oracle/simplex.hpp"

#include <algorithm>
#include <functional>

#include "telab/common/error.hpp"

namespace telab::oracle {

std::vector<double> project_simplex(std::span<const double> v) {
  if (v.empty()) throw ValidationError("cannot project an empty vector onto the simplex");
  std::vector<double> sorted(v.begin(), v.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    cumulative += sorted[i];
    const double candidate = (cumulative - 1.0) / static_cast<double>(i + 1);
    if (sorted[i] - candidate > 0.0) theta = candidate;
  }
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::max(0.0, v[i] - theta);
  return out;
}

}  // namespace telab::oracle
