#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "telab/net/traffic.hpp"

namespace telab::net {

enum class TopologyFormat { json, gml };

struct ParseOptions {
  // Capacity given to edges without an explicit capacity attribute.
  double default_capacity = 1.0;
};

// JSON: {"nodes":[name...], "edges":[{"src","dst","capacity"}...], "directed":bool}
//   ("directed" defaults to true; undirected edges expand to two directed
//   edges of equal capacity; duplicate directed edges are rejected).
// GML subset: graph [ directed N  node [ id X label "..." ]
//   edge [ source X target Y capacity C ] ]. Unknown keys are ignored,
//   nodes are named by label (or id when unlabeled), graphs are undirected
//   unless `directed 1`, and parallel links between the same endpoints are
//   merged by summing capacities.
// Throws ParseError for malformed text and ValidationError for invariant
// violations (dangling endpoint, nonpositive capacity, ...).
Topology parse_topology(std::string_view text, TopologyFormat format,
                        const ParseOptions& options = {});

// Format chosen from the extension (.gml, otherwise JSON).
Topology load_topology(const std::filesystem::path& path, const ParseOptions& options = {});

std::string topology_to_json(const Topology& topo);

// CSV with a header row of "src->dst" labels (|V|^2 columns, row-major in
// node order) and one row per interval.
std::string traffic_to_csv(const Topology& topo, std::span<const TrafficMatrix> series);
std::vector<TrafficMatrix> traffic_from_csv(std::string_view text, const Topology& topo);

// {"src->dst": [ratios...]} in tunnel-set pair order.
std::string config_to_json(const Topology& topo, const TunnelSet& tunnels, const TeConfig& cfg);
TeConfig config_from_json(std::string_view text, const Topology& topo, const TunnelSet& tunnels);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view contents);

// Shortest round-trip decimal form of a double.
std::string format_double(double v);

}  // namespace telab::net
