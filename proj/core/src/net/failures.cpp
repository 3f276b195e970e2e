#include "telab/net/failures.hpp"

#include <string>

#include "telab/common/error.hpp"

namespace telab::net {

FailureOutcome apply_failures(const Topology& topo, const TunnelSet& tunnels,
                              const TeConfig& cfg, const std::set<EdgeIndex>& failed) {
  for (EdgeIndex e : failed) {
    if (e >= topo.edge_count()) {
      throw ValidationError("failed edge " + std::to_string(e) + " is not in the topology");
    }
  }
  if (cfg.ratios.size() != tunnels.pairs.size()) {
    throw ShapeError("configuration is not aligned with the tunnel set");
  }
  FailureOutcome out;
  out.tunnels.k = tunnels.k;
  out.tunnels.node_count = tunnels.node_count;
  for (std::size_t i = 0; i < tunnels.pairs.size(); ++i) {
    const auto& pair = tunnels.pairs[i];
    const auto& ratios = cfg.ratios[i];
    if (ratios.size() != pair.tunnels.size()) {
      throw ShapeError("tunnel count mismatch for pair " + std::to_string(i));
    }
    PairTunnels kept{pair.src, pair.dst, {}};
    std::vector<double> kept_ratios;
    for (std::size_t j = 0; j < pair.tunnels.size(); ++j) {
      bool alive = true;
      for (EdgeIndex e : pair.tunnels[j].edges) {
        if (failed.count(e) != 0) {
          alive = false;
          break;
        }
      }
      if (alive) {
        kept.tunnels.push_back(pair.tunnels[j]);
        kept_ratios.push_back(ratios[j]);
      }
    }
    if (kept.tunnels.empty()) {
      out.disconnected.emplace_back(pair.src, pair.dst);
      continue;
    }
    double mass = 0.0;
    for (double r : kept_ratios) mass += r;
    if (kept.tunnels.size() == pair.tunnels.size()) {
      // untouched pair keeps its ratios bit-for-bit
    } else if (mass > 0.0) {
      for (double& r : kept_ratios) r /= mass;
    } else {
      for (double& r : kept_ratios) r = 1.0 / static_cast<double>(kept_ratios.size());
    }
    out.tunnels.pairs.push_back(std::move(kept));
    out.config.ratios.push_back(std::move(kept_ratios));
    out.source_pair.push_back(i);
  }
  return out;
}

}  // namespace telab::net
