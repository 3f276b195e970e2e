#include "telab/oracle/automaton.hpp"

#include "telab/common/error.hpp"
#include "telab/oracle/simplex.hpp"

namespace telab::oracle {

void SolverSettings::validate() const {
  if (!(step_size > 0.0)) throw ValidationError("solver step size must be positive");
  if (max_steps < 1) throw ValidationError("solver max_steps must be at least 1");
  if (!(halt_threshold > 0.0)) throw ValidationError("solver halt threshold must be positive");
  if (step_rule == StepRule::polyak && level_patience == 0) {
    throw ValidationError("solver level_patience must be at least 1");
  }
}

std::vector<std::vector<double>> mlu_subgradient(const Topology& topo, const TunnelSet& tunnels,
                                                 const TrafficMatrix& tm,
                                                 const net::MluResult& at) {
  std::vector<std::vector<double>> grad(tunnels.pairs.size());
  const net::EdgeIndex hot = at.bottleneck;
  const double capacity = topo.edge(hot).capacity;
  const bool loaded = at.mlu > 0.0;
  for (std::size_t i = 0; i < tunnels.pairs.size(); ++i) {
    const auto& pair = tunnels.pairs[i];
    grad[i].assign(pair.tunnels.size(), 0.0);
    if (!loaded) continue;
    const double weight = tm(pair.src, pair.dst) / capacity;
    for (std::size_t j = 0; j < pair.tunnels.size(); ++j) {
      if (pair.tunnels[j].traverses(hot)) grad[i][j] = weight;
    }
  }
  return grad;
}

std::vector<std::vector<double>> mlu_subgradient(const Topology& topo, const TunnelSet& tunnels,
                                                 const TrafficMatrix& tm, const TeConfig& cfg) {
  return mlu_subgradient(topo, tunnels, tm, net::evaluate_mlu(topo, tunnels, tm, cfg));
}

AutomatonState initial_state(const Topology& topo, const TunnelSet& tunnels,
                             const TrafficMatrix& tm, std::optional<TeConfig> init) {
  AutomatonState s;
  s.cfg = init ? std::move(*init) : net::uniform_config(tunnels);
  net::validate_config(tunnels, s.cfg);
  s.mlu = net::evaluate_mlu(topo, tunnels, tm, s.cfg).mlu;
  return s;
}

AutomatonState automaton_step(const AutomatonState& state, const Topology& topo,
                              const TunnelSet& tunnels, const TrafficMatrix& tm,
                              const SolverSettings& settings) {
  const auto grad = mlu_subgradient(topo, tunnels, tm, state.cfg);
  AutomatonState next;
  next.step = state.step + 1;
  next.cfg.ratios.resize(state.cfg.ratios.size());
  std::vector<double> moved;
  for (std::size_t i = 0; i < state.cfg.ratios.size(); ++i) {
    const auto& r = state.cfg.ratios[i];
    bool zero = true;
    for (double g : grad[i]) zero = zero && g == 0.0;
    if (zero || settings.step_size == 0.0) {
      next.cfg.ratios[i] = r;
      continue;
    }
    moved.assign(r.size(), 0.0);
    for (std::size_t j = 0; j < r.size(); ++j) moved[j] = r[j] - settings.step_size * grad[i][j];
    next.cfg.ratios[i] = project_simplex(moved);
  }
  next.mlu = net::evaluate_mlu(topo, tunnels, tm, next.cfg).mlu;
  return next;
}

}  // namespace telab::oracle
