#pragma once

#include <cstddef>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "telab/model/lmte.hpp"
#include "telab/oracle/automaton.hpp"
#include "telab/tm/series.hpp"

namespace telab::train {

enum class ScenarioKind { normal, single_failure, multi_failure, burst, drift };

struct Scenario {
  ScenarioKind kind = ScenarioKind::normal;
  std::size_t failure_count = 2;  // multi_failure
  double burst_scale = 10.0;      // burst; must be a protocol scale
  tm::DriftSegment segment = tm::DriftSegment::first_quarter;  // drift

  // "normal", "single-failure", "multi-failure-2", "burst-10", "drift-0-25".
  std::string tag() const;
  void validate() const;
};

enum class Policy { model, oracle, uniform, predictive };
std::string to_string(Policy p);
Policy parse_policy(const std::string& text);

struct EvalOptions {
  oracle::SolverSettings solver;
  // Links swept in the single-failure scenario, most critical first.
  std::size_t critical_links = 18;
  // Evenly strided subset of target intervals; 0 = all.
  std::size_t max_timesteps = 0;
  // Weighted-moving-average decay of the predictive baseline.
  double wma_decay = 0.5;
  std::uint64_t seed = 0;
  std::size_t workers = 1;
};

struct EvalRow {
  std::size_t timestep = 0;
  // Failed links ("A->B+B->A;...") or empty.
  std::string condition;
  double mlu = 0.0;
  double oracle_mlu = 0.0;
  double ratio = 1.0;
  bool oracle_converged = true;
  std::size_t disconnected_pairs = 0;
};

struct Aggregates {
  double mean = 0.0;
  double median = 0.0;
  double p95 = 0.0;
  std::size_t count = 0;
  // Rows left out because the oracle did not converge.
  std::size_t excluded = 0;
};

// Aggregates of the ratio column over rows whose oracle converged.
// p95 uses the nearest-rank definition.
Aggregates aggregate(const std::vector<EvalRow>& rows);

struct EvalReport {
  std::string scenario;
  std::string policy;
  std::vector<EvalRow> rows;
  Aggregates aggregates;
  std::size_t disconnected_pairs = 0;

  std::string to_csv() const;
  nlohmann::ordered_json summary() const;
};

// The physical links (a directed edge plus its reverse when present) ranked
// by the flow they carry under the oracle configuration of the mean matrix
// of `range`, heaviest first; at most `count` links.
std::vector<std::set<net::EdgeIndex>> critical_links(const net::Topology& topo, const net::TunnelSet& tunnels,
                                                     const tm::TrafficSeries& series, tm::IndexRange range,
                                                     const oracle::SolverSettings& solver, std::size_t count);

// Scores `policy` on every target interval of `range` (each needing
// `window` intervals of history). The oracle is solve_te on the realized
// matrix over the tunnels that survive the scenario's failures; policy
// configurations are post-processed with apply_failures. `model` is
// required for Policy::model.
EvalReport evaluate(const net::Topology& topo, const net::TunnelSet& tunnels, const tm::TrafficSeries& series,
                    tm::IndexRange range, std::size_t window, const Scenario& scenario, Policy policy,
                    const model::LmteModel* model, const EvalOptions& options);

}  // namespace telab::train
