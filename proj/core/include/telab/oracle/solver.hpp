#pragma once

#include <optional>
#include <span>
#include <vector>

#include "telab/oracle/automaton.hpp"

namespace telab::oracle {

struct SolveResult {
  TeConfig cfg;
  double mlu = 0.0;
  // Transitions executed.
  std::size_t steps = 0;
  // False when max_steps was reached before the halting rule fired.
  bool converged = false;
  // MLU of the automaton state after each transition (step 1..steps).
  std::vector<double> trace;
};

// Runs the TE automaton from `init` (uniform when absent). With the polyak
// rule transition t uses
//   eta_t = (f_t - (best_t - delta)) / |v_t|^2,
// where delta starts at step_size * f_0, grows by 1.2x whenever the best
// MLU improves and halves after level_patience transitions without
// improvement. With the diminishing rule
//   eta_t = step_size / (max|v_t| * sqrt(t)),
// i.e. no split ratio moves by more than step_size / sqrt(t) before
// projection. Halts once the best MLU improved by less than
// halt_threshold (relative) over the last `patience` transitions, or at
// max_steps. Returns the best-seen state, or the average of the iterates
// since the last power-of-two step when settings.averaging is set.
SolveResult solve_te(const Topology& topo, const TunnelSet& tunnels, const TrafficMatrix& tm,
                     const SolverSettings& settings, std::optional<TeConfig> init = std::nullopt);

struct ExpectedSolveResult {
  TeConfig cfg;
  double expected_mlu = 0.0;
  std::size_t steps = 0;
};

// Stochastic subgradient descent on the expected MLU over an empirical
// demand distribution. Transition t uses sample (t-1) mod |samples| with
// the diminishing step rule regardless of step_rule and runs max_steps
// transitions (the Polyak level needs a deterministic objective); the
// result is the averaged iterate over the trailing power-of-two window.
ExpectedSolveResult solve_expected(const Topology& topo, const TunnelSet& tunnels,
                                   std::span<const TrafficMatrix> samples,
                                   const SolverSettings& settings,
                                   std::optional<TeConfig> init = std::nullopt);

double expected_mlu(const Topology& topo, const TunnelSet& tunnels,
                    std::span<const TrafficMatrix> samples, const TeConfig& cfg);

}  // namespace telab::oracle
