#pragma once

#include <cstddef>
#include <vector>

#include "telab/net/topology.hpp"

namespace telab::model {

// A labeling-independent order of the nodes. Colors are refined from
// (in-degree, out-degree, incident capacities) by repeatedly folding in the
// sorted multisets of (neighbor color, capacity) along in- and out-edges
// until stable; nodes are then sorted by color, with node names breaking
// the remaining ties.
struct CanonicalOrder {
  // rank_of[v] = position of node v.
  std::vector<std::size_t> rank_of;
  // node_at[r] = node holding rank r.
  std::vector<net::NodeIndex> node_at;
};

CanonicalOrder canonical_order(const net::Topology& topo);

}  // namespace telab::model
