#pragma once

#include <vector>

#include "telab/net/traffic.hpp"

namespace telab::net {

struct MluResult {
  double mlu = 0.0;
  // Per-edge carried flow f_e, indexed by EdgeIndex.
  std::vector<double> flows;
  // Edge attaining the maximum utilization; lowest index on ties.
  EdgeIndex bottleneck = 0;
};

// Maximum link utilization of a configuration:
//   f_e = sum over pairs (s,t), tunnels p containing e of D[s][t] * r_p,
//   mlu = max_e f_e / c_e.
// Flows are accumulated in TunnelSet order. Throws ShapeError when the
// configuration does not align with the tunnel set or the matrix size
// does not match the topology.
MluResult evaluate_mlu(const Topology& topo, const TunnelSet& tunnels,
                       const TrafficMatrix& tm, const TeConfig& cfg);

}  // namespace telab::net
