#include "telab/model/canonical.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace telab::model {

namespace {

using Signature = std::vector<double>;

// Dense color ids ordered by signature.
std::vector<std::size_t> compress(const std::vector<Signature>& sigs) {
  std::map<Signature, std::size_t> ids;
  for (const auto& s : sigs) ids.emplace(s, 0);
  std::size_t next = 0;
  for (auto& [sig, id] : ids) id = next++;
  std::vector<std::size_t> out(sigs.size());
  for (std::size_t i = 0; i < sigs.size(); ++i) out[i] = ids.at(sigs[i]);
  return out;
}

std::size_t distinct(const std::vector<std::size_t>& colors) {
  std::vector<std::size_t> c = colors;
  std::sort(c.begin(), c.end());
  return static_cast<std::size_t>(std::unique(c.begin(), c.end()) - c.begin());
}

}  // namespace

CanonicalOrder canonical_order(const net::Topology& topo) {
  const std::size_t n = topo.node_count();
  std::vector<Signature> sigs(n);
  for (std::size_t v = 0; v < n; ++v) {
    std::vector<double> out_caps, in_caps;
    for (auto e : topo.out_edges(static_cast<net::NodeIndex>(v))) out_caps.push_back(topo.edge(e).capacity);
    for (auto e : topo.in_edges(static_cast<net::NodeIndex>(v))) in_caps.push_back(topo.edge(e).capacity);
    std::sort(out_caps.begin(), out_caps.end());
    std::sort(in_caps.begin(), in_caps.end());
    Signature& s = sigs[v];
    s.push_back(static_cast<double>(in_caps.size()));
    s.push_back(static_cast<double>(out_caps.size()));
    s.insert(s.end(), out_caps.begin(), out_caps.end());
    s.push_back(-1.0);
    s.insert(s.end(), in_caps.begin(), in_caps.end());
  }
  std::vector<std::size_t> colors = compress(sigs);
  for (std::size_t round = 0; round < n; ++round) {
    for (std::size_t v = 0; v < n; ++v) {
      std::vector<std::pair<double, double>> outs, ins;
      for (auto e : topo.out_edges(static_cast<net::NodeIndex>(v))) {
        outs.emplace_back(static_cast<double>(colors[topo.edge(e).head]), topo.edge(e).capacity);
      }
      for (auto e : topo.in_edges(static_cast<net::NodeIndex>(v))) {
        ins.emplace_back(static_cast<double>(colors[topo.edge(e).tail]), topo.edge(e).capacity);
      }
      std::sort(outs.begin(), outs.end());
      std::sort(ins.begin(), ins.end());
      Signature s{static_cast<double>(colors[v])};
      for (auto [c, cap] : outs) s.insert(s.end(), {c, cap});
      s.push_back(-1.0);
      for (auto [c, cap] : ins) s.insert(s.end(), {c, cap});
      sigs[v] = std::move(s);
    }
    std::vector<std::size_t> refined = compress(sigs);
    const bool stable = distinct(refined) == distinct(colors);
    colors = std::move(refined);
    if (stable) break;
  }

  CanonicalOrder order;
  order.node_at.resize(n);
  std::iota(order.node_at.begin(), order.node_at.end(), net::NodeIndex{0});
  std::sort(order.node_at.begin(), order.node_at.end(), [&](net::NodeIndex a, net::NodeIndex b) {
    if (colors[a] != colors[b]) return colors[a] < colors[b];
    return topo.node_name(a) < topo.node_name(b);
  });
  order.rank_of.resize(n);
  for (std::size_t r = 0; r < n; ++r) order.rank_of[order.node_at[r]] = r;
  return order;
}

}  // namespace telab::model
