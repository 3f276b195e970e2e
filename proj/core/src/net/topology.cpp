#include "telab/net/topology.hpp"

#include <cmath>

#include "telab/common/error.hpp"

namespace telab::net {

namespace {
std::uint64_t endpoint_key(NodeIndex tail, NodeIndex head) {
  return (static_cast<std::uint64_t>(tail) << 32) | head;
}
}  // namespace

Topology Topology::create(std::vector<std::string> node_names,
                          std::vector<Edge> edges) {
  Topology t;
  t.names_ = std::move(node_names);
  t.edges_ = std::move(edges);
  const std::size_t n = t.names_.size();
  t.out_.resize(n);
  t.in_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto [it, inserted] = t.by_name_.emplace(t.names_[i], static_cast<NodeIndex>(i));
    if (!inserted) throw ValidationError("duplicate node '" + t.names_[i] + "'");
  }
  for (std::size_t i = 0; i < t.edges_.size(); ++i) {
    const Edge& e = t.edges_[i];
    if (e.tail >= n || e.head >= n) {
      throw ValidationError("edge " + std::to_string(i) + " references an unknown node");
    }
    if (e.tail == e.head) {
      throw ValidationError("self loop at node '" + t.names_[e.tail] + "'");
    }
    if (!(e.capacity > 0.0) || !std::isfinite(e.capacity)) {
      throw ValidationError("edge " + t.names_[e.tail] + "->" + t.names_[e.head] +
                            " has nonpositive capacity");
    }
    auto [it, inserted] =
        t.by_endpoints_.emplace(endpoint_key(e.tail, e.head), static_cast<EdgeIndex>(i));
    if (!inserted) {
      throw ValidationError("duplicate directed edge " + t.names_[e.tail] + "->" +
                            t.names_[e.head]);
    }
    t.out_[e.tail].push_back(static_cast<EdgeIndex>(i));
    t.in_[e.head].push_back(static_cast<EdgeIndex>(i));
  }
  return t;
}

std::optional<NodeIndex> Topology::find_node(std::string_view name) const {
  auto it = by_name_.find(std::string(name));
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

std::optional<EdgeIndex> Topology::find_edge(NodeIndex tail, NodeIndex head) const {
  auto it = by_endpoints_.find(endpoint_key(tail, head));
  if (it == by_endpoints_.end()) return std::nullopt;
  return it->second;
}

std::string Topology::edge_label(EdgeIndex e) const {
  const Edge& ed = edge(e);
  return names_[ed.tail] + "->" + names_[ed.head];
}

}  // namespace telab::net
