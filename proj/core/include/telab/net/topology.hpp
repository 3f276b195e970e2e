#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace telab::net {

using NodeIndex = std::uint32_t;
using EdgeIndex = std::uint32_t;

// A directed, capacitated link. Capacity is in bandwidth units per
// traffic interval (the same units as traffic matrix entries).
struct Edge {
  NodeIndex tail = 0;
  NodeIndex head = 0;
  double capacity = 0.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

// Directed capacitated graph of routers and links.
//
// Invariants (checked by create()): capacities are strictly positive,
// edge endpoints name existing nodes, there is at most one edge per
// ordered (tail, head) pair and no self loops.
class Topology {
 public:
  Topology() = default;

  static Topology create(std::vector<std::string> node_names,
                         std::vector<Edge> edges);

  std::size_t node_count() const { return names_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  const std::string& node_name(NodeIndex n) const { return names_.at(n); }
  std::span<const std::string> node_names() const { return names_; }
  std::optional<NodeIndex> find_node(std::string_view name) const;

  const Edge& edge(EdgeIndex e) const { return edges_.at(e); }
  std::span<const Edge> edges() const { return edges_; }
  std::optional<EdgeIndex> find_edge(NodeIndex tail, NodeIndex head) const;

  std::span<const EdgeIndex> out_edges(NodeIndex n) const { return out_.at(n); }
  std::span<const EdgeIndex> in_edges(NodeIndex n) const { return in_.at(n); }

  // "tail->head" using node names.
  std::string edge_label(EdgeIndex e) const;

  friend bool operator==(const Topology& a, const Topology& b) {
    return a.names_ == b.names_ && a.edges_ == b.edges_;
  }

 private:
  std::vector<std::string> names_;
  std::vector<Edge> edges_;
  std::vector<std::vector<EdgeIndex>> out_;
  std::vector<std::vector<EdgeIndex>> in_;
  std::unordered_map<std::string, NodeIndex> by_name_;
  std::unordered_map<std::uint64_t, EdgeIndex> by_endpoints_;
};

}  // namespace telab::net
