#pragma once

#include <set>
#include <utility>
#include <vector>

#include "telab/net/traffic.hpp"

namespace telab::net {

struct FailureOutcome {
  // Surviving tunnels only; pairs with no survivor are dropped.
  TunnelSet tunnels;
  // Ratios aligned with `tunnels`.
  TeConfig config;
  // OD pairs that lost every tunnel.
  std::vector<std::pair<NodeIndex, NodeIndex>> disconnected;
  // For each surviving pair, its index in the original tunnel set.
  std::vector<std::size_t> source_pair;
};

// Removes tunnels that traverse a failed edge and hands their share to the
// surviving tunnels of the same pair in proportion to the survivors' own
// ratios (uniformly when the survivors hold no mass). Applying the same
// failure set to the outcome again returns it unchanged.
FailureOutcome apply_failures(const Topology& topo, const TunnelSet& tunnels,
                              const TeConfig& cfg, const std::set<EdgeIndex>& failed);

}  // namespace telab::net
