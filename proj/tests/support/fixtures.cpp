#include "fixtures.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>
#include <tuple>

namespace telab::testing {

net::Topology fig3_topology() {
  return net::Topology::create({"A", "B", "C", "D"},
                               {{0, 3, 1.0}, {0, 2, 1.0}, {1, 3, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}});
}

std::vector<net::TrafficMatrix> fig3_samples(const net::Topology& topo) {
  net::TrafficMatrix x(topo.node_count()), y(topo.node_count());
  x(0, 3) = 5.0 / 3.0;
  x(1, 3) = 5.0 / 6.0;
  y(0, 3) = 5.0 / 6.0;
  y(1, 3) = 5.0 / 3.0;
  return {x, y};
}

Fig3Pairs fig3_pairs(const net::TunnelSet& tunnels, const net::Topology& topo) {
  Fig3Pairs p;
  p.a = *tunnels.find_pair(*topo.find_node("A"), *topo.find_node("D"));
  p.b = *tunnels.find_pair(*topo.find_node("B"), *topo.find_node("D"));
  return p;
}

net::Topology random_topology(std::size_t nodes, double density, Rng& rng, double lo, double hi) {
  std::uniform_real_distribution<double> cap(lo, hi), unit(0.0, 1.0);
  std::vector<std::string> names;
  for (std::size_t i = 0; i < nodes; ++i) names.push_back("n" + std::to_string(i));
  std::set<std::pair<std::size_t, std::size_t>> arcs;
  for (std::size_t i = 0; i < nodes; ++i) arcs.insert({i, (i + 1) % nodes});
  for (std::size_t a = 0; a < nodes; ++a)
    for (std::size_t b = 0; b < nodes; ++b)
      if (a != b && unit(rng) < density) arcs.insert({a, b});
  std::vector<net::Edge> edges;
  for (auto [a, b] : arcs) {
    edges.push_back({static_cast<net::NodeIndex>(a), static_cast<net::NodeIndex>(b), cap(rng)});
  }
  return net::Topology::create(names, edges);
}

net::Topology random_bidirectional(std::size_t nodes, std::size_t chords, Rng& rng, double lo, double hi) {
  std::uniform_real_distribution<double> cap(lo, hi);
  std::uniform_int_distribution<std::size_t> pick(0, nodes - 1);
  std::vector<std::string> names;
  for (std::size_t i = 0; i < nodes; ++i) names.push_back("r" + std::to_string(i));
  std::set<std::pair<std::size_t, std::size_t>> links;
  for (std::size_t i = 0; i < nodes; ++i) links.insert(std::minmax(i, (i + 1) % nodes));
  std::size_t guard = 0;
  while (links.size() < nodes + chords && guard++ < 100 * (chords + 1)) {
    const std::size_t a = pick(rng), b = pick(rng);
    if (a != b) links.insert(std::minmax(a, b));
  }
  std::vector<net::Edge> edges;
  for (auto [a, b] : links) {
    const double c = cap(rng);
    edges.push_back({static_cast<net::NodeIndex>(a), static_cast<net::NodeIndex>(b), c});
    edges.push_back({static_cast<net::NodeIndex>(b), static_cast<net::NodeIndex>(a), c});
  }
  return net::Topology::create(names, edges);
}

net::TrafficMatrix random_tm(std::size_t nodes, Rng& rng, double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  net::TrafficMatrix tm(nodes);
  for (std::size_t s = 0; s < nodes; ++s)
    for (std::size_t t = 0; t < nodes; ++t)
      if (s != t) tm(s, t) = d(rng);
  return tm;
}

net::TeConfig random_config(const net::TunnelSet& tunnels, Rng& rng) {
  std::exponential_distribution<double> e(1.0);
  net::TeConfig cfg;
  for (const auto& p : tunnels.pairs) {
    std::vector<double> r(p.tunnels.size());
    double sum = 0.0;
    for (double& v : r) sum += (v = e(rng));
    for (double& v : r) v /= sum;
    cfg.ratios.push_back(std::move(r));
  }
  return cfg;
}

Permutation random_permutation(std::size_t nodes, Rng& rng) {
  Permutation p;
  p.map.resize(nodes);
  std::iota(p.map.begin(), p.map.end(), net::NodeIndex{0});
  std::shuffle(p.map.begin(), p.map.end(), rng);
  return p;
}

net::Topology permute(const net::Topology& topo, Permutation& perm) {
  const std::size_t n = topo.node_count();
  std::vector<std::string> names(n);
  for (std::size_t v = 0; v < n; ++v) names[perm.map[v]] = topo.node_name(static_cast<net::NodeIndex>(v));
  std::vector<net::Edge> edges;
  for (const auto& e : topo.edges()) edges.push_back({perm.map[e.tail], perm.map[e.head], e.capacity});
  // Shuffle edge order deterministically by new endpoints so indices change too.
  std::vector<std::size_t> order(edges.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::tie(edges[a].tail, edges[a].head) < std::tie(edges[b].tail, edges[b].head);
  });
  std::vector<net::Edge> sorted;
  perm.edge_map.assign(edges.size(), 0);
  for (std::size_t i = 0; i < order.size(); ++i) {
    sorted.push_back(edges[order[i]]);
    perm.edge_map[order[i]] = static_cast<net::EdgeIndex>(i);
  }
  return net::Topology::create(names, sorted);
}

net::TunnelSet permute(const net::TunnelSet& tunnels, const Permutation& perm, bool resort) {
  net::TunnelSet out;
  out.k = tunnels.k;
  out.node_count = tunnels.node_count;
  for (const auto& p : tunnels.pairs) {
    net::PairTunnels q;
    q.src = perm.map[p.src];
    q.dst = perm.map[p.dst];
    for (const auto& t : p.tunnels) {
      net::Tunnel u;
      u.src = q.src;
      u.dst = q.dst;
      for (auto e : t.edges) u.edges.push_back(perm.edge_map[e]);
      q.tunnels.push_back(std::move(u));
    }
    out.pairs.push_back(std::move(q));
  }
  if (!resort) return out;
  // Order the image the way select_tunnels would: pairs by (src, dst),
  // tunnels by (hops, edge sequence).
  std::sort(out.pairs.begin(), out.pairs.end(),
            [](const auto& a, const auto& b) { return std::tie(a.src, a.dst) < std::tie(b.src, b.dst); });
  for (auto& p : out.pairs) {
    std::sort(p.tunnels.begin(), p.tunnels.end(), [](const net::Tunnel& a, const net::Tunnel& b) {
      return a.hops() != b.hops() ? a.hops() < b.hops() : a.edges < b.edges;
    });
  }
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> tunnel_images(const net::TunnelSet& tunnels,
                                                               const net::TunnelSet& image,
                                                               const Permutation& perm) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (const auto& p : tunnels.pairs) {
    const std::size_t i = image.find_pair(perm.map[p.src], perm.map[p.dst]).value();
    for (const auto& t : p.tunnels) {
      std::vector<net::EdgeIndex> edges;
      for (auto e : t.edges) edges.push_back(perm.edge_map[e]);
      const auto& cand = image.pairs[i].tunnels;
      std::size_t j = 0;
      while (j < cand.size() && cand[j].edges != edges) ++j;
      if (j == cand.size()) throw std::logic_error("tunnel has no image");
      out.emplace_back(i, j);
    }
  }
  return out;
}

net::TeConfig permute(const net::TeConfig& cfg, const net::TunnelSet& tunnels, const net::TunnelSet& image,
                      const Permutation& perm) {
  net::TeConfig out;
  for (const auto& p : image.pairs) out.ratios.emplace_back(p.tunnels.size(), 0.0);
  const auto map = tunnel_images(tunnels, image, perm);
  std::size_t k = 0;
  for (std::size_t i = 0; i < cfg.ratios.size(); ++i)
    for (double r : cfg.ratios[i]) {
      out.ratios[map[k].first][map[k].second] = r;
      ++k;
    }
  return out;
}

net::TrafficMatrix permute(const net::TrafficMatrix& tm, const Permutation& perm) {
  net::TrafficMatrix out(tm.node_count());
  for (std::size_t s = 0; s < tm.node_count(); ++s)
    for (std::size_t t = 0; t < tm.node_count(); ++t) out(perm.map[s], perm.map[t]) = tm(s, t);
  return out;
}

SmallInstance small_instance(std::uint64_t seed) {
  Rng rng = make_rng(derive_seed(seed, "fixture.small"));
  std::uniform_int_distribution<std::size_t> nodes(3, 6), active(1, 4);
  std::uniform_real_distribution<double> demand(0.5, 5.0);
  SmallInstance out;
  out.topo = random_topology(nodes(rng), 0.35, rng);
  const auto all = net::select_tunnels(out.topo, 3);
  std::vector<std::size_t> idx(all.pairs.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::shuffle(idx.begin(), idx.end(), rng);
  idx.resize(std::min(idx.size(), active(rng)));
  std::sort(idx.begin(), idx.end());
  out.tunnels.k = all.k;
  out.tunnels.node_count = all.node_count;
  out.tm = net::TrafficMatrix(out.topo.node_count());
  for (auto i : idx) {
    out.tunnels.pairs.push_back(all.pairs[i]);
    out.tm(all.pairs[i].src, all.pairs[i].dst) = demand(rng);
  }
  return out;
}

Dataset gravity_dataset(std::size_t nodes, std::size_t length, std::size_t k, std::uint64_t seed, double noise) {
  Rng rng = make_rng(derive_seed(seed, "fixture.topology"));
  Dataset d;
  d.topo = random_bidirectional(nodes, nodes / 2 + 1, rng);
  d.tunnels = net::select_tunnels(d.topo, k);
  tm::GravitySpec g;
  g.node_masses = tm::default_masses(d.topo);
  // Scale volume so the uniform split sits near full utilization.
  g.total_volume = 4.0 * static_cast<double>(nodes);
  g.season_amplitude = 0.2;
  g.season_period = 24;
  g.noise_std = noise;
  g.seed = derive_seed(seed, "fixture.gravity");
  d.series = tm::generate_gravity_series(d.topo, g, length);
  return d;
}

}  // namespace telab::testing
