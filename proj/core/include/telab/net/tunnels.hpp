#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "telab/net/topology.hpp"

namespace telab::net {

// A simple path from src to dst, stored as the ordered edges it traverses.
struct Tunnel {
  NodeIndex src = 0;
  NodeIndex dst = 0;
  std::vector<EdgeIndex> edges;

  std::size_t hops() const { return edges.size(); }
  // Node sequence src, ..., dst.
  std::vector<NodeIndex> nodes(const Topology& topo) const;
  bool traverses(EdgeIndex e) const;

  friend bool operator==(const Tunnel&, const Tunnel&) = default;
};

// Checks chaining, endpoints and simplicity; throws ValidationError.
void validate_tunnel(const Topology& topo, const Tunnel& tunnel);

// Candidate tunnels of one ordered OD pair.
struct PairTunnels {
  NodeIndex src = 0;
  NodeIndex dst = 0;
  std::vector<Tunnel> tunnels;

  friend bool operator==(const PairTunnels&, const PairTunnels&) = default;
};

// Tunnel sets for every routable OD pair. Pairs without any path are not
// stored. The order of `pairs` is the canonical iteration order used by
// every consumer (MLU accumulation, configurations, model outputs).
struct TunnelSet {
  std::size_t k = 0;
  std::size_t node_count = 0;
  std::vector<PairTunnels> pairs;

  std::optional<std::size_t> find_pair(NodeIndex src, NodeIndex dst) const;
  std::size_t tunnel_count() const;
  std::size_t max_tunnels_per_pair() const;
  std::size_t max_hops() const;

  friend bool operator==(const TunnelSet&, const TunnelSet&) = default;
};

// Up to k loopless shortest paths (hop count) for every ordered pair
// s != t, enumerated with Yen's algorithm. Paths are ordered by
// (hop count, lexicographic node-index sequence); pairs are ordered by
// (src, dst).
TunnelSet select_tunnels(const Topology& topo, std::size_t k);

// Yen enumeration for a single pair; exposed for tests and tools.
std::vector<Tunnel> k_shortest_tunnels(const Topology& topo, NodeIndex src,
                                       NodeIndex dst, std::size_t k);

}  // namespace telab::net
