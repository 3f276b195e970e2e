#include "telab/train/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "telab/common/error.hpp"
#include "telab/common/parallel.hpp"
#include "telab/net/failures.hpp"
#include "telab/net/io.hpp"
#include "telab/net/mlu.hpp"
#include "telab/oracle/predict.hpp"
#include "telab/oracle/solver.hpp"

namespace telab::train {

std::string Scenario::tag() const {
  switch (kind) {
    case ScenarioKind::normal: return "normal";
    case ScenarioKind::single_failure: return "single-failure";
    case ScenarioKind::multi_failure: return "multi-failure-" + std::to_string(failure_count);
    case ScenarioKind::burst: return "burst-" + net::format_double(burst_scale);
    case ScenarioKind::drift: return "drift-" + tm::to_string(segment);
  }
  return "unknown";
}

void Scenario::validate() const {
  if (kind == ScenarioKind::burst && !tm::is_protocol_burst_scale(burst_scale)) {
    throw ValidationError("burst scale " + net::format_double(burst_scale) + " is not one of 2, 5, 10, 20, 30");
  }
  if (kind == ScenarioKind::multi_failure && failure_count == 0) {
    throw ValidationError("multi-failure scenario needs at least one failed link");
  }
}

std::string to_string(Policy p) {
  switch (p) {
    case Policy::model: return "model";
    case Policy::oracle: return "oracle";
    case Policy::uniform: return "uniform";
    case Policy::predictive: return "predictive";
  }
  return "unknown";
}

Policy parse_policy(const std::string& text) {
  for (Policy p : {Policy::model, Policy::oracle, Policy::uniform, Policy::predictive}) {
    if (to_string(p) == text) return p;
  }
  throw ValidationError("unknown policy '" + text + "'");
}

Aggregates aggregate(const std::vector<EvalRow>& rows) {
  Aggregates a;
  std::vector<double> r;
  for (const auto& row : rows) {
    if (row.oracle_converged) {
      r.push_back(row.ratio);
    } else {
      ++a.excluded;
    }
  }
  a.count = r.size();
  if (r.empty()) return a;
  std::sort(r.begin(), r.end());
  double sum = 0.0;
  for (double x : r) sum += x;
  a.mean = sum / static_cast<double>(r.size());
  const std::size_t n = r.size();
  a.median = n % 2 ? r[n / 2] : 0.5 * (r[n / 2 - 1] + r[n / 2]);
  const auto rank = static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(n)));
  a.p95 = r[std::max<std::size_t>(rank, 1) - 1];
  return a;
}

std::string EvalReport::to_csv() const {
  std::ostringstream out;
  out << "scenario,policy,timestep,condition,mlu,oracle_mlu,ratio,oracle_converged,disconnected_pairs\n";
  for (const auto& r : rows) {
    out << scenario << ',' << policy << ',' << r.timestep << ',' << r.condition << ','
        << net::format_double(r.mlu) << ',' << net::format_double(r.oracle_mlu) << ','
        << net::format_double(r.ratio) << ',' << (r.oracle_converged ? 1 : 0) << ',' << r.disconnected_pairs
        << '\n';
  }
  return out.str();
}

nlohmann::ordered_json EvalReport::summary() const {
  nlohmann::ordered_json j;
  j["schema"] = "telab-eval-report/1";
  j["scenario"] = scenario;
  j["policy"] = policy;
  j["timesteps"] = rows.size();
  j["mean"] = aggregates.mean;
  j["median"] = aggregates.median;
  j["p95"] = aggregates.p95;
  j["count"] = aggregates.count;
  j["excluded_nonconverged"] = aggregates.excluded;
  j["disconnected_pairs"] = disconnected_pairs;
  return j;
}

namespace {

std::vector<std::set<net::EdgeIndex>> physical_links(const net::Topology& topo) {
  std::vector<std::set<net::EdgeIndex>> links;
  for (std::size_t e = 0; e < topo.edge_count(); ++e) {
    const auto& edge = topo.edge(static_cast<net::EdgeIndex>(e));
    const auto rev = topo.find_edge(edge.head, edge.tail);
    if (rev && *rev < e) continue;
    std::set<net::EdgeIndex> link{static_cast<net::EdgeIndex>(e)};
    if (rev) link.insert(*rev);
    links.push_back(std::move(link));
  }
  return links;
}

std::string describe(const net::Topology& topo, const std::set<net::EdgeIndex>& failed) {
  std::string out;
  for (auto e : failed) {
    if (!out.empty()) out += '+';
    out += topo.edge_label(e);
  }
  return out;
}

net::TrafficMatrix mean_matrix(const tm::TrafficSeries& series, tm::IndexRange range) {
  net::TrafficMatrix mean(series.node_count());
  for (std::size_t t = range.begin; t < range.end; ++t) {
    auto dst = mean.values();
    const auto src = series[t].values();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
  }
  for (double& v : mean.values()) v /= static_cast<double>(range.size());
  return mean;
}

}  // namespace

std::vector<std::set<net::EdgeIndex>> critical_links(const net::Topology& topo, const net::TunnelSet& tunnels,
                                                     const tm::TrafficSeries& series, tm::IndexRange range,
                                                     const oracle::SolverSettings& solver, std::size_t count) {
  if (range.size() == 0) throw ValidationError("empty range for link criticality");
  const auto mean = mean_matrix(series, range);
  const auto solved = oracle::solve_te(topo, tunnels, mean, solver);
  const auto flows = net::evaluate_mlu(topo, tunnels, mean, solved.cfg).flows;
  auto links = physical_links(topo);
  std::vector<std::pair<double, std::size_t>> score;
  for (std::size_t i = 0; i < links.size(); ++i) {
    double f = 0.0;
    for (auto e : links[i]) f += flows[e];
    score.emplace_back(f, i);
  }
  std::stable_sort(score.begin(), score.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  std::vector<std::set<net::EdgeIndex>> out;
  for (std::size_t i = 0; i < std::min(count, score.size()); ++i) out.push_back(links[score[i].second]);
  return out;
}

EvalReport evaluate(const net::Topology& topo, const net::TunnelSet& tunnels, const tm::TrafficSeries& series,
                    tm::IndexRange range, std::size_t window, const Scenario& scenario, Policy policy,
                    const model::LmteModel* model, const EvalOptions& options) {
  scenario.validate();
  if (policy == Policy::model && model == nullptr) throw ValidationError("model policy needs a model");
  if (range.begin < window) throw ValidationError("evaluation range lacks history lead-in");
  if (range.end > series.size()) throw ValidationError("evaluation range exceeds the series");

  const tm::TrafficSeries* data = &series;
  tm::TrafficSeries burst;
  if (scenario.kind == ScenarioKind::burst) {
    burst = tm::inject_burst(series, scenario.burst_scale, derive_seed(options.seed, "eval.burst"));
    data = &burst;
  }

  std::vector<std::size_t> steps;
  for (std::size_t t = range.begin; t < range.end; ++t) steps.push_back(t);
  if (options.max_timesteps > 0 && steps.size() > options.max_timesteps) {
    std::vector<std::size_t> picked;
    const double stride = static_cast<double>(steps.size()) / static_cast<double>(options.max_timesteps);
    for (std::size_t i = 0; i < options.max_timesteps; ++i) {
      picked.push_back(steps[static_cast<std::size_t>(std::floor(static_cast<double>(i) * stride))]);
    }
    steps = std::move(picked);
  }

  // (timestep, failed set) tasks.
  std::vector<std::pair<std::size_t, std::set<net::EdgeIndex>>> tasks;
  if (scenario.kind == ScenarioKind::single_failure) {
    const auto links = critical_links(topo, tunnels, *data, range, options.solver, options.critical_links);
    for (const auto& link : links)
      for (auto t : steps) tasks.emplace_back(t, link);
  } else if (scenario.kind == ScenarioKind::multi_failure) {
    const auto links = physical_links(topo);
    if (scenario.failure_count > links.size()) throw ValidationError("more failures requested than links exist");
    for (auto t : steps) {
      Rng rng = make_rng(derive_seed(options.seed, "eval.multi-failure") + t);
      std::vector<std::size_t> idx(links.size());
      for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
      std::shuffle(idx.begin(), idx.end(), rng);
      std::set<net::EdgeIndex> failed;
      for (std::size_t i = 0; i < scenario.failure_count; ++i) failed.insert(links[idx[i]].begin(), links[idx[i]].end());
      tasks.emplace_back(t, std::move(failed));
    }
  } else {
    for (auto t : steps) tasks.emplace_back(t, std::set<net::EdgeIndex>{});
  }

  const auto uniform = net::uniform_config(tunnels);
  std::vector<EvalRow> rows(tasks.size());
  parallel_for(
      tasks.size(),
      [&](std::size_t i) {
        const auto& [t, failed] = tasks[i];
        const auto& target = (*data)[t];
        const std::span<const net::TrafficMatrix> history(data->matrices.data() + (t - window), window);
        const auto survivors = net::apply_failures(topo, tunnels, uniform, failed);
        EvalRow row;
        row.timestep = t;
        row.condition = describe(topo, failed);
        row.disconnected_pairs = survivors.disconnected.size();
        oracle::SolveResult best;
        if (!survivors.tunnels.pairs.empty()) {
          best = oracle::solve_te(topo, survivors.tunnels, target, options.solver);
        }
        row.oracle_mlu = best.mlu;
        row.oracle_converged = survivors.tunnels.pairs.empty() || best.converged;

        net::TeConfig routed;
        switch (policy) {
          case Policy::oracle:
            routed = best.cfg;
            break;
          case Policy::uniform:
            routed = survivors.config;
            break;
          case Policy::predictive: {
            const auto predicted = oracle::predict_wma(history, options.wma_decay);
            routed = survivors.tunnels.pairs.empty()
                         ? net::TeConfig{}
                         : oracle::solve_te(topo, survivors.tunnels, predicted, options.solver).cfg;
            break;
          }
          case Policy::model: {
            model::Constraints c;
            c.failed_links = failed;
            if (scenario.kind == ScenarioKind::burst) c.burst_scale = scenario.burst_scale;
            routed = net::apply_failures(topo, tunnels, model->infer(history, c), failed).config;
            break;
          }
        }
        net::validate_config(survivors.tunnels, routed);
        row.mlu = survivors.tunnels.pairs.empty() ? 0.0
                                                  : net::evaluate_mlu(topo, survivors.tunnels, target, routed).mlu;
        if (row.oracle_mlu > 0.0) {
          row.ratio = row.mlu / row.oracle_mlu;
        } else {
          row.ratio = row.mlu > 0.0 ? std::numeric_limits<double>::infinity() : 1.0;
        }
        rows[i] = std::move(row);
      },
      options.workers);

  EvalReport report;
  report.scenario = scenario.tag();
  report.policy = to_string(policy);
  report.rows = std::move(rows);
  report.aggregates = aggregate(report.rows);
  for (const auto& r : report.rows) report.disconnected_pairs += r.disconnected_pairs;
  return report;
}

}  // namespace telab::train
