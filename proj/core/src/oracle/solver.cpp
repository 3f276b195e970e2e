#include "telab/oracle/solver.hpp"

#include <cmath>
#include <deque>

#include "telab/common/error.hpp"
#include "telab/oracle/simplex.hpp"

namespace telab::oracle {

namespace {

bool has_freedom(const TunnelSet& tunnels) {
  for (const auto& p : tunnels.pairs) {
    if (p.tunnels.size() > 1) return true;
  }
  return false;
}

double max_abs(const std::vector<std::vector<double>>& g) {
  double m = 0.0;
  for (const auto& row : g)
    for (double v : row) m = std::max(m, std::abs(v));
  return m;
}

void descend(TeConfig& cfg, const std::vector<std::vector<double>>& grad, double eta) {
  std::vector<double> moved;
  for (std::size_t i = 0; i < cfg.ratios.size(); ++i) {
    auto& r = cfg.ratios[i];
    bool zero = true;
    for (double g : grad[i]) zero = zero && g == 0.0;
    if (zero || r.size() < 2) continue;
    moved.resize(r.size());
    for (std::size_t j = 0; j < r.size(); ++j) moved[j] = r[j] - eta * grad[i][j];
    r = project_simplex(moved);
  }
}

// Running mean of iterates, restarted whenever the step index reaches a
// power of two so that it covers roughly the trailing half of the run.
class TailAverage {
 public:
  explicit TailAverage(const TeConfig& shape) : sum_(shape) { clear(); }

  void add(std::size_t step, const TeConfig& cfg) {
    if ((step & (step - 1)) == 0) clear();
    for (std::size_t i = 0; i < sum_.ratios.size(); ++i)
      for (std::size_t j = 0; j < sum_.ratios[i].size(); ++j) sum_.ratios[i][j] += cfg.ratios[i][j];
    ++count_;
  }

  TeConfig mean() const {
    TeConfig out = sum_;
    for (auto& row : out.ratios) {
      double total = 0.0;
      for (double& v : row) {
        v /= static_cast<double>(count_);
        total += v;
      }
      // the average of simplex points is on the simplex; renormalize the
      // rounding residue
      for (double& v : row) v /= total;
    }
    return out;
  }

  bool empty() const { return count_ == 0; }

 private:
  void clear() {
    for (auto& row : sum_.ratios) std::fill(row.begin(), row.end(), 0.0);
    count_ = 0;
  }
  TeConfig sum_;
  std::size_t count_ = 0;
};

}  // namespace

SolveResult solve_te(const Topology& topo, const TunnelSet& tunnels, const TrafficMatrix& tm,
                     const SolverSettings& settings, std::optional<TeConfig> init) {
  settings.validate();
  AutomatonState state = initial_state(topo, tunnels, tm, std::move(init));
  SolveResult result;
  result.cfg = state.cfg;
  result.mlu = state.mlu;
  if (!has_freedom(tunnels) || state.mlu == 0.0) {
    result.converged = true;
    return result;
  }

  net::MluResult at = net::evaluate_mlu(topo, tunnels, tm, state.cfg);
  std::deque<double> best_history{state.mlu};
  TailAverage average(state.cfg);
  double level_gap = settings.step_size * state.mlu;
  std::size_t stalled = 0;
  result.trace.reserve(std::min<std::size_t>(settings.max_steps, 1 << 16));

  while (state.step < settings.max_steps) {
    const auto grad = mlu_subgradient(topo, tunnels, tm, at);
    const double scale = max_abs(grad);
    if (scale == 0.0) {
      result.converged = true;
      break;
    }
    double eta = 0.0;
    if (settings.step_rule == StepRule::polyak) {
      double norm2 = 0.0;
      for (const auto& row : grad)
        for (double v : row) norm2 += v * v;
      eta = (state.mlu - (result.mlu - level_gap)) / norm2;
    } else {
      eta = settings.step_size / (scale * std::sqrt(static_cast<double>(state.step + 1)));
    }
    descend(state.cfg, grad, eta);
    ++state.step;
    at = net::evaluate_mlu(topo, tunnels, tm, state.cfg);
    state.mlu = at.mlu;
    result.trace.push_back(state.mlu);
    if (settings.averaging) average.add(state.step, state.cfg);
    if (state.mlu < result.mlu) {
      result.mlu = state.mlu;
      result.cfg = state.cfg;
      level_gap *= 1.2;
      stalled = 0;
    } else if (++stalled >= settings.level_patience) {
      level_gap *= 0.5;
      stalled = 0;
    }
    best_history.push_back(result.mlu);
    if (best_history.size() > settings.patience + 1) best_history.pop_front();
    if (best_history.size() == settings.patience + 1) {
      const double before = best_history.front();
      if (before - result.mlu <= settings.halt_threshold * before) {
        result.converged = true;
        break;
      }
    }
  }
  result.steps = state.step;
  if (settings.averaging && !average.empty()) {
    result.cfg = average.mean();
    result.mlu = net::evaluate_mlu(topo, tunnels, tm, result.cfg).mlu;
  }
  return result;
}

double expected_mlu(const Topology& topo, const TunnelSet& tunnels,
                    std::span<const TrafficMatrix> samples, const TeConfig& cfg) {
  if (samples.empty()) throw ValidationError("expected MLU needs at least one sample");
  double total = 0.0;
  for (const auto& tm : samples) total += net::evaluate_mlu(topo, tunnels, tm, cfg).mlu;
  return total / static_cast<double>(samples.size());
}

ExpectedSolveResult solve_expected(const Topology& topo, const TunnelSet& tunnels,
                                   std::span<const TrafficMatrix> samples,
                                   const SolverSettings& settings, std::optional<TeConfig> init) {
  settings.validate();
  if (samples.empty()) throw ValidationError("solve_expected needs at least one sample");
  TeConfig cfg = init ? std::move(*init) : net::uniform_config(tunnels);
  net::validate_config(tunnels, cfg);
  ExpectedSolveResult result;
  TailAverage average(cfg);
  if (has_freedom(tunnels)) {
    for (std::size_t step = 1; step <= settings.max_steps; ++step) {
      const TrafficMatrix& tm = samples[(step - 1) % samples.size()];
      const auto grad = mlu_subgradient(topo, tunnels, tm, cfg);
      const double scale = max_abs(grad);
      if (scale > 0.0) {
        descend(cfg, grad, settings.step_size / (scale * std::sqrt(static_cast<double>(step))));
      }
      average.add(step, cfg);
      result.steps = step;
    }
  }
  result.cfg = average.empty() ? cfg : average.mean();
  result.expected_mlu = expected_mlu(topo, tunnels, samples, result.cfg);
  return result;
}

}  // namespace telab::oracle
