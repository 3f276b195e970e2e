#include "telab/net/tunnels.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <set>

#include "telab/common/error.hpp"

namespace telab::net {

std::vector<NodeIndex> Tunnel::nodes(const Topology& topo) const {
  std::vector<NodeIndex> seq;
  seq.reserve(edges.size() + 1);
  seq.push_back(src);
  for (EdgeIndex e : edges) seq.push_back(topo.edge(e).head);
  return seq;
}

bool Tunnel::traverses(EdgeIndex e) const {
  return std::find(edges.begin(), edges.end(), e) != edges.end();
}

void validate_tunnel(const Topology& topo, const Tunnel& tunnel) {
  if (tunnel.edges.empty()) throw ValidationError("tunnel has no edges");
  std::vector<bool> seen(topo.node_count(), false);
  NodeIndex at = tunnel.src;
  seen[at] = true;
  for (EdgeIndex e : tunnel.edges) {
    if (e >= topo.edge_count()) throw ValidationError("tunnel references unknown edge");
    const Edge& ed = topo.edge(e);
    if (ed.tail != at) throw ValidationError("tunnel edges do not chain");
    at = ed.head;
    if (seen[at]) throw ValidationError("tunnel revisits node " + topo.node_name(at));
    seen[at] = true;
  }
  if (at != tunnel.dst) throw ValidationError("tunnel does not end at its destination");
}

std::optional<std::size_t> TunnelSet::find_pair(NodeIndex src, NodeIndex dst) const {
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (pairs[i].src == src && pairs[i].dst == dst) return i;
  }
  return std::nullopt;
}

std::size_t TunnelSet::tunnel_count() const {
  std::size_t n = 0;
  for (const auto& p : pairs) n += p.tunnels.size();
  return n;
}

std::size_t TunnelSet::max_tunnels_per_pair() const {
  std::size_t m = 0;
  for (const auto& p : pairs) m = std::max(m, p.tunnels.size());
  return m;
}

std::size_t TunnelSet::max_hops() const {
  std::size_t m = 0;
  for (const auto& p : pairs)
    for (const auto& t : p.tunnels) m = std::max(m, t.hops());
  return m;
}

namespace {

using Path = std::vector<NodeIndex>;

struct PathOrder {
  bool operator()(const Path& a, const Path& b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  }
};

// Lexicographically smallest among the hop-shortest paths from `from` to
// `to`, avoiding blocked nodes and edges. Empty when unreachable.
Path lexmin_shortest_path(const Topology& topo, NodeIndex from, NodeIndex to,
                          const std::vector<bool>& blocked_node,
                          const std::vector<bool>& blocked_edge) {
  constexpr auto kInf = std::numeric_limits<std::size_t>::max();
  const std::size_t n = topo.node_count();
  std::vector<std::size_t> dist(n, kInf);
  std::deque<NodeIndex> queue;
  dist[to] = 0;
  queue.push_back(to);
  while (!queue.empty()) {
    const NodeIndex v = queue.front();
    queue.pop_front();
    for (EdgeIndex e : topo.in_edges(v)) {
      if (blocked_edge[e]) continue;
      const NodeIndex u = topo.edge(e).tail;
      if (blocked_node[u] || dist[u] != kInf) continue;
      dist[u] = dist[v] + 1;
      queue.push_back(u);
    }
  }
  if (dist[from] == kInf) return {};
  Path path{from};
  NodeIndex at = from;
  while (at != to) {
    NodeIndex best = static_cast<NodeIndex>(n);
    for (EdgeIndex e : topo.out_edges(at)) {
      if (blocked_edge[e]) continue;
      const NodeIndex w = topo.edge(e).head;
      if (blocked_node[w] || dist[w] + 1 != dist[at]) continue;
      best = std::min(best, w);
    }
    at = best;
    path.push_back(at);
  }
  return path;
}

Tunnel to_tunnel(const Topology& topo, const Path& path) {
  Tunnel t;
  t.src = path.front();
  t.dst = path.back();
  t.edges.reserve(path.size() - 1);
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    t.edges.push_back(*topo.find_edge(path[i], path[i + 1]));
  }
  return t;
}

}  // namespace

std::vector<Tunnel> k_shortest_tunnels(const Topology& topo, NodeIndex src,
                                       NodeIndex dst, std::size_t k) {
  std::vector<Tunnel> out;
  if (k == 0 || src == dst) return out;
  const std::size_t n = topo.node_count();
  std::vector<bool> no_nodes(n, false);
  std::vector<bool> no_edges(topo.edge_count(), false);

  std::vector<Path> accepted;
  Path first = lexmin_shortest_path(topo, src, dst, no_nodes, no_edges);
  if (first.empty()) return out;
  accepted.push_back(std::move(first));
  std::set<Path, PathOrder> candidates;

  while (accepted.size() < k) {
    const Path& prev = accepted.back();
    for (std::size_t i = 0; i + 1 < prev.size(); ++i) {
      const NodeIndex spur = prev[i];
      std::vector<bool> blocked_node(n, false);
      std::vector<bool> blocked_edge(topo.edge_count(), false);
      for (std::size_t j = 0; j < i; ++j) blocked_node[prev[j]] = true;
      for (const Path& p : accepted) {
        if (p.size() > i + 1 && std::equal(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(i) + 1,
                                           prev.begin())) {
          blocked_edge[*topo.find_edge(p[i], p[i + 1])] = true;
        }
      }
      Path tail = lexmin_shortest_path(topo, spur, dst, blocked_node, blocked_edge);
      if (tail.empty()) continue;
      Path candidate(prev.begin(), prev.begin() + static_cast<std::ptrdiff_t>(i));
      candidate.insert(candidate.end(), tail.begin(), tail.end());
      if (std::find(accepted.begin(), accepted.end(), candidate) == accepted.end()) {
        candidates.insert(std::move(candidate));
      }
    }
    if (candidates.empty()) break;
    accepted.push_back(*candidates.begin());
    candidates.erase(candidates.begin());
  }

  out.reserve(accepted.size());
  for (const Path& p : accepted) out.push_back(to_tunnel(topo, p));
  return out;
}

TunnelSet select_tunnels(const Topology& topo, std::size_t k) {
  if (k == 0) throw ValidationError("tunnels per pair must be at least 1");
  TunnelSet set;
  set.k = k;
  set.node_count = topo.node_count();
  const auto n = static_cast<NodeIndex>(topo.node_count());
  for (NodeIndex s = 0; s < n; ++s) {
    for (NodeIndex t = 0; t < n; ++t) {
      if (s == t) continue;
      auto tunnels = k_shortest_tunnels(topo, s, t, k);
      if (tunnels.empty()) continue;
      set.pairs.push_back(PairTunnels{s, t, std::move(tunnels)});
    }
  }
  return set;
}

}  // namespace telab::net
