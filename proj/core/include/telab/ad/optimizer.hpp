#pragma once

#include <cstddef>
#include <vector>

#include "telab/ad/parameters.hpp"

namespace telab::ad {

struct AdamState {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  std::size_t step = 0;
  // Moment buffers aligned with ParameterSet::entries(); sized on first use.
  std::vector<std::vector<double>> m;
  std::vector<std::vector<double>> v;
};

// One bias-corrected Adam update of every parameter outside frozen groups,
// then zeroes all gradients. Missing gradients count as zero.
void optimizer_step(ParameterSet& params, AdamState& state);

}  // namespace telab::ad
