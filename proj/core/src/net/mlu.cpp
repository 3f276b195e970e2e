#include "telab/net/mlu.hpp"

#include <string>

#include "telab/common/error.hpp"

namespace telab::net {

MluResult evaluate_mlu(const Topology& topo, const TunnelSet& tunnels,
                       const TrafficMatrix& tm, const TeConfig& cfg) {
  if (tm.node_count() != topo.node_count()) {
    throw ShapeError("traffic matrix has " + std::to_string(tm.node_count()) +
                     " nodes, topology has " + std::to_string(topo.node_count()));
  }
  if (cfg.ratios.size() != tunnels.pairs.size()) {
    throw ShapeError("configuration is not aligned with the tunnel set");
  }
  MluResult out;
  out.flows.assign(topo.edge_count(), 0.0);
  for (std::size_t i = 0; i < tunnels.pairs.size(); ++i) {
    const auto& pair = tunnels.pairs[i];
    const auto& r = cfg.ratios[i];
    if (r.size() != pair.tunnels.size()) {
      throw ShapeError("tunnel count mismatch for pair " + topo.node_name(pair.src) + "->" +
                       topo.node_name(pair.dst));
    }
    const double demand = tm(pair.src, pair.dst);
    if (demand == 0.0) continue;
    for (std::size_t j = 0; j < r.size(); ++j) {
      const double volume = demand * r[j];
      for (EdgeIndex e : pair.tunnels[j].edges) out.flows[e] += volume;
    }
  }
  for (std::size_t e = 0; e < out.flows.size(); ++e) {
    const double u = out.flows[e] / topo.edge(static_cast<EdgeIndex>(e)).capacity;
    if (u > out.mlu) {
      out.mlu = u;
      out.bottleneck = static_cast<EdgeIndex>(e);
    }
  }
  return out;
}

}  // namespace telab::net
