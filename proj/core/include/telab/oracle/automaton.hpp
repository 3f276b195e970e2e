#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "telab/net/mlu.hpp"

namespace telab::oracle {

using net::TeConfig;
using net::Topology;
using net::TrafficMatrix;
using net::TunnelSet;

// One state q_t of the TE automaton.
struct AutomatonState {
  TeConfig cfg;
  std::size_t step = 0;
  double mlu = 0.0;
};

enum class StepRule {
  // eta_t = (f_t - (best_t - delta_t)) / |v_t|^2 with an adaptive level gap
  // delta (Polyak step toward an estimated optimum).
  polyak,
  // eta_t = step_size / (max|v_t| sqrt(t)).
  diminishing,
};

struct SolverSettings {
  // Step size eta. automaton_step() uses it verbatim. In solve_te() it is
  // the initial relative level gap (polyak) or the base step (diminishing);
  // see solver.hpp.
  double step_size = 0.1;
  StepRule step_rule = StepRule::polyak;
  // Polyak rule: non-improving transitions before the level gap is halved.
  std::size_t level_patience = 30;
  // Relative best-MLU improvement over `patience` steps below which the
  // solver halts.
  double halt_threshold = 1e-5;
  std::size_t max_steps = 20000;
  std::size_t patience = 200;
  // Return the averaged iterate instead of the best-seen one.
  bool averaging = false;

  void validate() const;
};

// Per-pair subgradient of the MLU at cfg. With e* the most utilized edge
// (lowest index on ties), the component for tunnel p of pair (s,t) is
// D[s][t] / c_{e*} when p traverses e*, else 0.
std::vector<std::vector<double>> mlu_subgradient(const Topology& topo, const TunnelSet& tunnels,
                                                 const TrafficMatrix& tm, const TeConfig& cfg);

// Same, given an already evaluated MluResult for cfg.
std::vector<std::vector<double>> mlu_subgradient(const Topology& topo, const TunnelSet& tunnels,
                                                 const TrafficMatrix& tm,
                                                 const net::MluResult& at);

// q_{t+1} = Proj(q_t - eta * v_t) per pair, with eta = settings.step_size.
AutomatonState automaton_step(const AutomatonState& state, const Topology& topo,
                              const TunnelSet& tunnels, const TrafficMatrix& tm,
                              const SolverSettings& settings);

// Initial state (uniform split unless given) with its MLU.
AutomatonState initial_state(const Topology& topo, const TunnelSet& tunnels,
                             const TrafficMatrix& tm, std::optional<TeConfig> init = std::nullopt);

}  // namespace telab::oracle
