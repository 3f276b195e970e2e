#include "telab/train/loss.hpp"

#include <algorithm>

#include "telab/ad/ops.hpp"
#include "telab/common/error.hpp"

namespace telab::train {

using ad::Tensor;

LossLayout make_loss_layout(const net::Topology& topo, const net::TunnelSet& tunnels) {
  LossLayout l;
  l.pairs = tunnels.pairs.size();
  l.width = tunnels.max_tunnels_per_pair();
  const std::size_t m = topo.edge_count();
  std::vector<double> inc(l.pairs * l.width * m, 0.0);
  for (std::size_t i = 0; i < l.pairs; ++i) {
    const auto& ts = tunnels.pairs[i].tunnels;
    for (std::size_t j = 0; j < ts.size(); ++j) {
      for (auto e : ts[j].edges) inc[(i * l.width + j) * m + e] = 1.0;
    }
  }
  l.incidence = Tensor::constant({l.pairs * l.width, m}, std::move(inc));
  std::vector<double> caps(m);
  for (std::size_t e = 0; e < m; ++e) caps[e] = topo.edge(static_cast<net::EdgeIndex>(e)).capacity;
  l.capacities = Tensor::constant({1, m}, std::move(caps));
  return l;
}

Tensor mlu_loss(const LossLayout& layout, const net::TunnelSet& tunnels, const net::TrafficMatrix& tm,
                const Tensor& ratios, const std::vector<std::size_t>& dropped) {
  if (ratios.rows() != layout.pairs || ratios.cols() != layout.width) {
    throw ShapeError("ratio tensor does not match the tunnel layout");
  }
  if (tm.node_count() != tunnels.node_count) throw ShapeError("traffic matrix size differs from topology");
  std::vector<double> demand(layout.pairs * layout.width, 0.0);
  for (std::size_t i = 0; i < layout.pairs; ++i) {
    if (std::find(dropped.begin(), dropped.end(), i) != dropped.end()) continue;
    const auto& pair = tunnels.pairs[i];
    const double d = tm(pair.src, pair.dst);
    for (std::size_t j = 0; j < pair.tunnels.size(); ++j) demand[i * layout.width + j] = d;
  }
  const Tensor weighted = mul(ratios, Tensor::constant({layout.pairs, layout.width}, std::move(demand)));
  const Tensor flows = matmul(reshape(weighted, {1, weighted.size()}), layout.incidence);
  return reduce_max(divide(flows, layout.capacities));
}

Tensor mlu_loss(const net::Topology& topo, const net::TunnelSet& tunnels, const net::TrafficMatrix& tm,
                const Tensor& ratios) {
  return mlu_loss(make_loss_layout(topo, tunnels), tunnels, tm, ratios);
}

Tensor config_tensor(const net::TunnelSet& tunnels, const net::TeConfig& cfg) {
  net::validate_config(tunnels, cfg);
  const std::size_t width = tunnels.max_tunnels_per_pair();
  std::vector<double> v(tunnels.pairs.size() * width, 0.0);
  for (std::size_t i = 0; i < cfg.ratios.size(); ++i)
    for (std::size_t j = 0; j < cfg.ratios[i].size(); ++j) v[i * width + j] = cfg.ratios[i][j];
  return Tensor::constant({tunnels.pairs.size(), width}, std::move(v));
}

}  // namespace telab::train
