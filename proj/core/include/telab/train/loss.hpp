#pragma once

#include <vector>

#include "telab/ad/tensor.hpp"
#include "telab/net/traffic.hpp"

namespace telab::train {

// Dense tunnel/edge incidence and capacities for building the MLU as a
// graph: row p*width + j of `incidence` marks the edges of tunnel j of
// pair p.
struct LossLayout {
  std::size_t pairs = 0;
  std::size_t width = 0;
  ad::Tensor incidence;   // pairs*width x E
  ad::Tensor capacities;  // 1 x E
};

LossLayout make_loss_layout(const net::Topology& topo, const net::TunnelSet& tunnels);

// reduce_max over edges of (sum_p D_p r_p [e in p]) / c_e. Pairs listed in
// `dropped` carry no demand (they lost every tunnel).
ad::Tensor mlu_loss(const LossLayout& layout, const net::TunnelSet& tunnels, const net::TrafficMatrix& tm,
                    const ad::Tensor& ratios, const std::vector<std::size_t>& dropped = {});

ad::Tensor mlu_loss(const net::Topology& topo, const net::TunnelSet& tunnels, const net::TrafficMatrix& tm,
                    const ad::Tensor& ratios);

// Configuration as a constant pairs x width tensor (zeros in padding).
ad::Tensor config_tensor(const net::TunnelSet& tunnels, const net::TeConfig& cfg);

}  // namespace telab::train
