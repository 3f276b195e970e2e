#pragma once

#include <string>
#include <vector>

#include "telab/common/rng.hpp"
#include "telab/net/io.hpp"
#include "telab/net/traffic.hpp"
#include "telab/tm/series.hpp"

namespace bench {

// Ring with chords, both directions, capacities in [5, 10].
inline telab::net::Topology ring(std::size_t n, std::uint64_t seed = 1) {
  telab::Rng rng = telab::make_rng(seed);
  std::uniform_real_distribution<double> cap(5.0, 10.0);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("r" + std::to_string(i));
  std::vector<telab::net::Edge> edges;
  auto link = [&](std::size_t a, std::size_t b) {
    for (const auto& e : edges)
      if (e.tail == a && e.head == b) return;
    const double c = cap(rng);
    edges.push_back({static_cast<telab::net::NodeIndex>(a), static_cast<telab::net::NodeIndex>(b), c});
    edges.push_back({static_cast<telab::net::NodeIndex>(b), static_cast<telab::net::NodeIndex>(a), c});
  };
  for (std::size_t i = 0; i < n; ++i) link(i, (i + 1) % n);
  for (std::size_t c = 0; c < n / 2; ++c) {
    const std::size_t a = pick(rng), b = pick(rng);
    if (a != b) link(a, b);
  }
  return telab::net::Topology::create(names, edges);
}

inline telab::net::Topology abilene() { return telab::net::load_topology(std::string(TELAB_DATA_DIR) + "/abilene.json"); }

inline telab::tm::TrafficSeries gravity(const telab::net::Topology& topo, std::size_t length, std::uint64_t seed = 1) {
  telab::tm::GravitySpec spec;
  spec.node_masses = telab::tm::default_masses(topo);
  spec.total_volume = 4.0 * static_cast<double>(topo.node_count());
  spec.season_amplitude = 0.2;
  spec.noise_std = 0.08;
  spec.seed = seed;
  return telab::tm::generate_gravity_series(topo, spec, length);
}

}  // namespace bench
