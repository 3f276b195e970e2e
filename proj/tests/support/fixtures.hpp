#pragma once

#include <cstdint>
#include <vector>

#include "telab/common/rng.hpp"
#include "telab/net/traffic.hpp"
#include "telab/tm/series.hpp"

namespace telab::testing {

// Two origins A, B sending to D, directly or via C; every capacity 1.
net::Topology fig3_topology();
// Demands (A->D, B->D) = (5/3, 5/6) and (5/6, 5/3).
std::vector<net::TrafficMatrix> fig3_samples(const net::Topology& topo);
// Index of the direct tunnel of A->D and B->D in select_tunnels(topo, 2).
struct Fig3Pairs {
  std::size_t a = 0;
  std::size_t b = 0;
};
Fig3Pairs fig3_pairs(const net::TunnelSet& tunnels, const net::Topology& topo);

// Strongly connected random digraph: a directed ring plus extra random arcs
// (each ordered pair with probability `density`), capacities in [lo, hi].
net::Topology random_topology(std::size_t nodes, double density, Rng& rng, double lo = 1.0,
                              double hi = 10.0);
// Undirected ring-with-chords topology (both directions, equal capacity).
net::Topology random_bidirectional(std::size_t nodes, std::size_t chords, Rng& rng, double lo = 5.0,
                                   double hi = 10.0);
net::TrafficMatrix random_tm(std::size_t nodes, Rng& rng, double lo = 0.0, double hi = 1.0);
net::TeConfig random_config(const net::TunnelSet& tunnels, Rng& rng);

// Relabels node v as perm[v] (names travel with the nodes).
struct Permutation {
  std::vector<net::NodeIndex> map;  // old -> new
  std::vector<net::EdgeIndex> edge_map;  // old edge -> new edge
};
Permutation random_permutation(std::size_t nodes, Rng& rng);
// Edge order follows the relabeled (tail, head) order of the original list.
net::Topology permute(const net::Topology& topo, Permutation& perm);
// With `resort` the image's pairs and tunnels are ordered as select_tunnels
// would order them, so positions change; otherwise list order is kept.
net::TunnelSet permute(const net::TunnelSet& tunnels, const Permutation& perm, bool resort);
// (pair, tunnel) position in `image` of every tunnel of `tunnels`, in
// TunnelSet order.
std::vector<std::pair<std::size_t, std::size_t>> tunnel_images(const net::TunnelSet& tunnels,
                                                               const net::TunnelSet& image,
                                                               const Permutation& perm);
net::TeConfig permute(const net::TeConfig& cfg, const net::TunnelSet& tunnels, const net::TunnelSet& image,
                      const Permutation& perm);
net::TrafficMatrix permute(const net::TrafficMatrix& tm, const Permutation& perm);

// Random instance with at most 6 nodes, 3 tunnels per pair and 4 pairs
// carrying demand; the tunnel set holds only the active pairs.
struct SmallInstance {
  net::Topology topo;
  net::TunnelSet tunnels;
  net::TrafficMatrix tm;
};
SmallInstance small_instance(std::uint64_t seed);

// 12-node gravity dataset on a ring-with-chords backbone.
struct Dataset {
  net::Topology topo;
  net::TunnelSet tunnels;
  tm::TrafficSeries series;
};
Dataset gravity_dataset(std::size_t nodes, std::size_t length, std::size_t k, std::uint64_t seed,
                        double noise = 0.08);

}  // namespace telab::testing
