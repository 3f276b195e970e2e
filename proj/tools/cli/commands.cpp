#include "cli/commands.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <functional>
#include <memory>
#include <ostream>
#include <sstream>

#include "cli/artifacts.hpp"
#include "cli/report.hpp"
#include "telab/ad/checkpoint.hpp"
#include "telab/common/checksum.hpp"
#include "telab/common/error.hpp"
#include "telab/common/parallel.hpp"
#include "telab/common/rng.hpp"
#include "telab/net/io.hpp"
#include "telab/oracle/finite_automaton.hpp"
#include "telab/oracle/solver.hpp"
#include "telab/tm/io.hpp"

namespace telab::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

std::string require(const std::string& path, const char* what) {
  if (path.empty()) throw ValidationError(std::string("missing --") + what);
  if (!fs::exists(path)) throw ValidationError(std::string(what) + " file '" + path + "' does not exist");
  return path;
}

net::Topology load_topology(const ExperimentConfig& cfg) {
  return net::load_topology(require(cfg.paths.topology, "topology"));
}

std::string range_text(tm::IndexRange r) {
  return "[" + std::to_string(r.begin) + "," + std::to_string(r.end) + ")";
}

// Chronological split, or the drift layout for the drift scenario. The
// training range starts late enough to have a full history window.
tm::DatasetSplit resolve_split(const ExperimentConfig& cfg, std::size_t length) {
  auto split = cfg.scenario.kind == "drift"
                   ? tm::segment_for_drift(length, tm::parse_drift_segment(cfg.scenario.drift_segment))
                   : tm::split_dataset(length, cfg.split);
  split.train.begin = std::max(split.train.begin, cfg.window);
  if (split.train.begin >= split.train.end) {
    throw ValidationError("training range " + range_text(split.train) + " is too short for window " +
                          std::to_string(cfg.window));
  }
  return split;
}

std::string topology_checksum(const net::Topology& topo) { return hex64(fnv1a64(net::topology_to_json(topo))); }

void finish(RunOutput& run, const ExperimentConfig& cfg, std::ostream& out) {
  run.commit();
  out << "wrote artifacts to " << cfg.paths.output_dir << '\n';
}

}  // namespace

void gen_data(const ExperimentConfig& cfg, std::ostream& out) {
  const auto topo = load_topology(cfg);
  tm::GravitySpec spec;
  spec.node_masses = tm::default_masses(topo);
  spec.total_volume = cfg.data.total_volume;
  if (spec.total_volume == 0.0) {
    for (const auto& e : topo.edges()) spec.total_volume += 0.25 * e.capacity;
  }
  spec.trend_slope = cfg.data.trend_slope;
  spec.season_amplitude = cfg.data.season_amplitude;
  spec.season_period = cfg.data.season_period;
  spec.noise_std = cfg.data.noise_std;
  spec.seed = derive_seed(cfg.seed, "gen-data.gravity");
  auto series = tm::generate_gravity_series(topo, spec, cfg.data.length);
  series.provenance = "gravity";

  RunOutput run(cfg.paths.output_dir, "gen-data", to_json(cfg));
  run.write("topology.json", net::topology_to_json(topo));
  run.record("series.csv");
  run.record(tm::sidecar_path(run.path("series.csv")).filename().string());
  tm::save_series(run.path("series.csv"), topo, series, spec);
  run.summary()["nodes"] = topo.node_count();
  run.summary()["edges"] = topo.edge_count();
  run.summary()["length"] = series.size();
  run.summary()["total_volume"] = spec.total_volume;
  finish(run, cfg, out);
}

void solve(const ExperimentConfig& cfg, std::ostream& out) {
  const auto topo = load_topology(cfg);
  const auto tunnels = net::select_tunnels(topo, cfg.tunnels_k);
  std::vector<net::TrafficMatrix> tms;
  if (!cfg.paths.tm.empty()) {
    tms = net::traffic_from_csv(net::read_text_file(require(cfg.paths.tm, "tm")), topo);
  } else if (!cfg.paths.series.empty()) {
    tms = tm::load_series(require(cfg.paths.series, "series"), topo).matrices;
  } else {
    throw ValidationError("solve needs --tm or --series");
  }
  if (tms.empty()) throw ValidationError("no traffic matrix to solve");

  std::vector<oracle::SolveResult> results(tms.size());
  parallel_for(
      tms.size(), [&](std::size_t i) { results[i] = oracle::solve_te(topo, tunnels, tms[i], cfg.solver); },
      cfg.eval.workers);

  RunOutput run(cfg.paths.output_dir, "solve", to_json(cfg));
  if (tms.size() == 1) {
    run.write("config.json", net::config_to_json(topo, tunnels, results[0].cfg));
    std::ostringstream conv;
    conv << "step,mlu\n";
    for (std::size_t t = 0; t < results[0].trace.size(); ++t) {
      conv << t + 1 << ',' << net::format_double(results[0].trace[t]) << '\n';
    }
    run.write("convergence.csv", conv.str());
  } else {
    std::ostringstream rows;
    rows << "interval,mlu,steps,converged\n";
    auto configs = ordered_json::array();
    for (std::size_t i = 0; i < results.size(); ++i) {
      rows << i << ',' << net::format_double(results[i].mlu) << ',' << results[i].steps << ','
           << (results[i].converged ? 1 : 0) << '\n';
      configs.push_back(ordered_json::parse(net::config_to_json(topo, tunnels, results[i].cfg)));
    }
    run.write("solutions.csv", rows.str());
    run.write("configs.json", configs.dump(2) + "\n");
  }
  std::size_t converged = 0;
  double mean = 0.0;
  for (const auto& r : results) {
    converged += r.converged ? 1 : 0;
    mean += r.mlu / static_cast<double>(results.size());
  }
  run.summary()["matrices"] = tms.size();
  run.summary()["converged"] = converged;
  run.summary()["mean_mlu"] = mean;
  finish(run, cfg, out);
}

void train_model(const ExperimentConfig& cfg, std::ostream& out) {
  const auto topo = load_topology(cfg);
  auto tunnels = net::select_tunnels(topo, cfg.tunnels_k);
  const auto series = tm::load_series(require(cfg.paths.series, "series"), topo);
  const auto split = resolve_split(cfg, series.size());
  const auto mcfg = cfg.resolved_model();
  model::LmteModel m(topo, std::move(tunnels), mcfg, derive_seed(cfg.seed, "model.init"));
  auto settings = cfg.train;
  settings.seed = derive_seed(cfg.seed, "train");
  const auto trace = train::train(m, series, split, settings);

  RunOutput run(cfg.paths.output_dir, "train", to_json(cfg));
  nlohmann::json meta;
  meta["model"] = to_json(mcfg);
  meta["tunnels_k"] = cfg.tunnels_k;
  meta["window"] = cfg.window;
  meta["topology_checksum"] = topology_checksum(topo);
  meta["best_epoch"] = trace.best_epoch;
  run.record("model.ckpt");
  ad::save_checkpoint(run.path("model.ckpt"), ad::capture(m.params(), meta));
  run.write("train_trace.csv", trace.to_csv());
  auto& s = run.summary();
  s["split"] = {{"train", range_text(split.train)},
                {"validation", range_text(split.validation)},
                {"test", range_text(split.test)}};
  s["best_epoch"] = trace.best_epoch;
  s["best_validation_mlu"] = trace.best_validation_mlu;
  s["batches"] = trace.batches;
  s["augmented_batches"] = trace.augmented_batches;
  s["frozen_checksum_before"] = hex64(trace.frozen_checksum_before);
  s["frozen_checksum_after"] = hex64(trace.frozen_checksum_after);
  s["trainable_parameters"] = m.params().trainable_count();
  finish(run, cfg, out);
}

void evaluate_policy(const ExperimentConfig& cfg, std::ostream& out) {
  const auto topo = load_topology(cfg);
  const auto tunnels = net::select_tunnels(topo, cfg.tunnels_k);
  const auto series = tm::load_series(require(cfg.paths.series, "series"), topo);
  const auto policy = train::parse_policy(cfg.eval.policy);
  const auto split = resolve_split(cfg, series.size());

  std::unique_ptr<model::LmteModel> m;
  if (policy == train::Policy::model) {
    const auto ckpt = ad::load_checkpoint(require(cfg.paths.checkpoint, "checkpoint"));
    if (ckpt.meta.value("tunnels_k", cfg.tunnels_k) != cfg.tunnels_k ||
        ckpt.meta.value("window", cfg.window) != cfg.window) {
      throw ValidationError("checkpoint was trained with a different tunnel count or window");
    }
    if (ckpt.meta.value("topology_checksum", std::string()) != topology_checksum(topo)) {
      throw ValidationError("checkpoint was trained on a different topology");
    }
    const auto mcfg = model_config_from_json(ckpt.meta.at("model"));
    m = std::make_unique<model::LmteModel>(topo, tunnels, mcfg, 0);
    ad::apply_checkpoint(m->params(), ckpt);
  }
  train::EvalOptions options;
  options.solver = cfg.solver;
  options.critical_links = cfg.eval.critical_links;
  options.max_timesteps = cfg.eval.max_timesteps;
  options.wma_decay = cfg.eval.wma_decay;
  options.seed = derive_seed(cfg.seed, "eval");
  options.workers = cfg.eval.workers;
  const auto rep = train::evaluate(topo, tunnels, series, split.test, cfg.window, cfg.resolved_scenario(), policy,
                                   m.get(), options);

  RunOutput run(cfg.paths.output_dir, "eval", to_json(cfg));
  run.write("report.csv", rep.to_csv());
  run.write("report.json", rep.summary().dump(2) + "\n");
  run.summary() = rep.summary();
  out << rep.scenario << ' ' << rep.policy << " mean " << net::format_double(rep.aggregates.mean) << " median "
      << net::format_double(rep.aggregates.median) << " p95 " << net::format_double(rep.aggregates.p95) << '\n';
  finish(run, cfg, out);
}

void report(const ExperimentConfig& cfg, std::ostream& out) {
  if (cfg.paths.reports.empty()) throw ValidationError("report needs at least one eval report");
  std::vector<nlohmann::json> docs;
  for (const auto& p : cfg.paths.reports) {
    try {
      docs.push_back(nlohmann::json::parse(net::read_text_file(require(p, "report"))));
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(p + ": " + e.what());
    }
  }
  const auto cmp = emit_report(docs);
  RunOutput run(cfg.paths.output_dir, "report", to_json(cfg));
  run.write("comparison.csv", cmp.to_csv());
  run.write("comparison.json", cmp.to_json().dump(2) + "\n");
  run.summary()["rows"] = cmp.rows.size();
  out << cmp.to_csv();
  finish(run, cfg, out);
}

void simulate_automaton(const ExperimentConfig& cfg, std::ostream& out) {
  const auto& s = cfg.automaton;
  Rng rng = make_rng(derive_seed(cfg.seed, "automaton"));
  std::uniform_int_distribution<oracle::State> state(0, static_cast<oracle::State>(s.states - 1));
  std::uniform_int_distribution<oracle::Symbol> symbol(0, static_cast<oracle::Symbol>(s.alphabet - 1));
  std::vector<std::vector<oracle::State>> tables(s.alphabet, std::vector<oracle::State>(s.states));
  for (auto& t : tables)
    for (auto& q : t) q = state(rng);
  const oracle::FiniteAutomaton a(s.states, std::move(tables));
  std::vector<oracle::Symbol> word(s.length);
  for (auto& w : word) w = symbol(rng);
  const oracle::State q0 = state(rng);

  const auto seq = oracle::sequential_simulate(a, word, q0);
  const auto par = oracle::parallel_simulate(a, word, q0, s.workers);
  const bool identical = seq == par.trajectory;

  RunOutput run(cfg.paths.output_dir, "simulate-automaton", to_json(cfg));
  std::ostringstream csv;
  csv << "t,symbol,sequential,parallel\n";
  for (std::size_t t = 0; t < word.size(); ++t) {
    csv << t + 1 << ',' << word[t] << ',' << seq[t] << ',' << par.trajectory[t] << '\n';
  }
  run.write("automaton.csv", csv.str());
  run.summary()["length"] = s.length;
  run.summary()["levels"] = par.levels;
  run.summary()["identical"] = identical;
  if (!identical) throw Error("parallel and sequential trajectories differ");
  out << "levels " << par.levels << ", trajectories identical\n";
  finish(run, cfg, out);
}

namespace {

// Flags whose values are applied to the config only when given.
class Overrides {
 public:
  template <typename T>
  CLI::Option* add(CLI::App* app, const std::string& name, const std::string& help,
                   std::function<void(ExperimentConfig&, const T&)> apply) {
    auto value = std::make_shared<T>();
    CLI::Option* opt = app->add_option(name, *value, help);
    appliers_.push_back([opt, value, apply](ExperimentConfig& c) {
      if (opt->count() > 0) apply(c, *value);
    });
    return opt;
  }

  void apply(ExperimentConfig& c) const {
    for (const auto& f : appliers_) f(c);
  }

 private:
  std::vector<std::function<void(ExperimentConfig&)>> appliers_;
};

void add_common(CLI::App* app, Overrides& o) {
  o.add<std::string>(app, "-o,--output-dir", "Directory for artifacts",
                     [](auto& c, const auto& v) { c.paths.output_dir = v; });
  o.add<std::uint64_t>(app, "--seed", "Global seed", [](auto& c, const auto& v) { c.seed = v; });
}

void add_network(CLI::App* app, Overrides& o) {
  o.add<std::string>(app, "--topology", "Topology file (.json or .gml)",
                     [](auto& c, const auto& v) { c.paths.topology = v; });
  o.add<std::size_t>(app, "-k,--tunnels", "Tunnels per pair", [](auto& c, const auto& v) { c.tunnels_k = v; });
  o.add<std::size_t>(app, "--workers", "Worker threads", [](auto& c, const auto& v) { c.eval.workers = v; });
}

void add_series(CLI::App* app, Overrides& o) {
  o.add<std::string>(app, "--series", "Traffic series CSV", [](auto& c, const auto& v) { c.paths.series = v; });
  o.add<std::size_t>(app, "--window", "History window", [](auto& c, const auto& v) { c.window = v; });
  o.add<std::string>(app, "--scenario", "normal, single-failure, multi-failure, burst or drift",
                     [](auto& c, const auto& v) { c.scenario.kind = v; });
  o.add<std::string>(app, "--segment", "Drift training segment (0-25, 25-50, 50-75)",
                     [](auto& c, const auto& v) { c.scenario.drift_segment = v; });
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"WAN traffic engineering laboratory", "telab"};
  app.require_subcommand(1);
  Overrides o;
  std::string config_path;

  struct Sub {
    CLI::App* app;
    void (*run)(const ExperimentConfig&, std::ostream&);
  };
  std::vector<Sub> subs;
  auto make = [&](const char* name, const char* help, void (*run)(const ExperimentConfig&, std::ostream&)) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("-c,--config", config_path, "Experiment config or provenance JSON");
    add_common(sub, o);
    subs.push_back({sub, run});
    return sub;
  };

  auto* gen = make("gen-data", "Generate a gravity-model traffic series", gen_data);
  o.add<std::string>(gen, "--nodes-from,--topology", "Topology file (.json or .gml)",
                     [](auto& c, const auto& v) { c.paths.topology = v; });
  o.add<std::size_t>(gen, "--length", "Intervals", [](auto& c, const auto& v) { c.data.length = v; });
  o.add<double>(gen, "--volume", "Total demand per interval (0: a quarter of the capacity)",
                [](auto& c, const auto& v) { c.data.total_volume = v; });
  o.add<double>(gen, "--noise", "Relative noise", [](auto& c, const auto& v) { c.data.noise_std = v; });

  auto* sol = make("solve", "Run the oracle on a traffic matrix or series", solve);
  add_network(sol, o);
  o.add<std::string>(sol, "--tm", "Traffic CSV", [](auto& c, const auto& v) { c.paths.tm = v; });
  o.add<std::string>(sol, "--series", "Traffic series CSV", [](auto& c, const auto& v) { c.paths.series = v; });
  o.add<std::size_t>(sol, "--max-steps", "Transition budget", [](auto& c, const auto& v) { c.solver.max_steps = v; });

  auto* tr = make("train", "Train the model", train_model);
  add_network(tr, o);
  add_series(tr, o);
  o.add<std::size_t>(tr, "--epochs", "Epochs", [](auto& c, const auto& v) { c.train.epochs = v; });
  o.add<std::size_t>(tr, "--batch-size", "Batch size", [](auto& c, const auto& v) { c.train.batch_size = v; });
  o.add<double>(tr, "--lr", "Learning rate", [](auto& c, const auto& v) { c.train.learning_rate = v; });
  o.add<double>(tr, "--augmentation", "Per-batch augmentation probability",
                [](auto& c, const auto& v) { c.train.augmentation_probability = v; });

  auto* ev = make("eval", "Score a policy on the test range", evaluate_policy);
  add_network(ev, o);
  add_series(ev, o);
  o.add<std::string>(ev, "--checkpoint", "Trained model", [](auto& c, const auto& v) { c.paths.checkpoint = v; });
  o.add<std::string>(ev, "--policy", "model, oracle, uniform or predictive",
                     [](auto& c, const auto& v) { c.eval.policy = v; });
  o.add<double>(ev, "--scale", "Burst scale", [](auto& c, const auto& v) { c.scenario.burst_scale = v; });
  o.add<std::size_t>(ev, "--failures", "Links failed in the multi-failure scenario",
                     [](auto& c, const auto& v) { c.scenario.failure_count = v; });
  o.add<std::size_t>(ev, "--critical-links", "Links swept in the single-failure scenario",
                     [](auto& c, const auto& v) { c.eval.critical_links = v; });
  o.add<std::size_t>(ev, "--max-timesteps", "Evenly strided subset of the test range",
                     [](auto& c, const auto& v) { c.eval.max_timesteps = v; });

  auto* rep = make("report", "Combine eval reports into a comparison table", report);
  o.add<std::vector<std::string>>(rep, "reports", "report.json files", [](auto& c, const auto& v) {
    c.paths.reports = v;
  });

  auto* aut = make("simulate-automaton", "Compare parallel and sequential automaton runs", simulate_automaton);
  o.add<std::size_t>(aut, "--states", "States", [](auto& c, const auto& v) { c.automaton.states = v; });
  o.add<std::size_t>(aut, "--alphabet", "Input symbols", [](auto& c, const auto& v) { c.automaton.alphabet = v; });
  o.add<std::size_t>(aut, "--length", "Word length", [](auto& c, const auto& v) { c.automaton.length = v; });
  o.add<std::size_t>(aut, "--workers", "Worker threads", [](auto& c, const auto& v) { c.automaton.workers = v; });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    ExperimentConfig cfg;
    if (!config_path.empty()) {
      nlohmann::json doc;
      try {
        doc = nlohmann::json::parse(net::read_text_file(require(config_path, "config")));
      } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(config_path + ": " + e.what());
      }
      cfg = config_from_json(doc);
    }
    if (const char* dir = std::getenv(kOutputDirEnv); dir && *dir) cfg.paths.output_dir = dir;
    o.apply(cfg);
    cfg.validate();
    for (const auto& s : subs) {
      if (s.app->parsed()) s.run(cfg, out);
    }
    return kExitOk;
  } catch (const TrainingError& e) {
    err << "training failed: " << e.what() << '\n';
    return kExitTraining;
  } catch (const ParseError& e) {
    err << "invalid input: " << e.what() << '\n';
    return kExitInvalidInput;
  } catch (const ValidationError& e) {
    err << "invalid input: " << e.what() << '\n';
    return kExitInvalidInput;
  } catch (const ShapeError& e) {
    err << "invalid input: " << e.what() << '\n';
    return kExitInvalidInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace telab::cli
