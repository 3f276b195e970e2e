// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Every tolerance and budget is pinned below.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <set>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>

#include "cli/commands.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "primitive_cases.hpp"
#include "telab/ad/grad_check.hpp"
#include "telab/common/error.hpp"
#include "telab/net/failures.hpp"
#include "telab/net/io.hpp"
#include "telab/net/mlu.hpp"
#include "telab/oracle/finite_automaton.hpp"
#include "telab/oracle/solver.hpp"
#include "telab/train/evaluate.hpp"
#include "telab/train/loss.hpp"
#include "telab/train/trainer.hpp"

namespace {

using namespace telab;
namespace fs = std::filesystem;

// 1
constexpr double kFig3Target = 0.6;
constexpr double kFig3GridTol = 0.01;
constexpr double kFig3SolverTol = 0.02;
constexpr double kFig3Budget = 10.0;
// 2
constexpr std::size_t kBruteInstances = 50;
constexpr double kBruteRelTol = 0.01;
constexpr double kBruteBudget = 60.0;
// 3
constexpr std::size_t kAutomata = 1000;
constexpr std::size_t kMaxStates = 64;
constexpr std::size_t kMaxLength = 256;
// 4
constexpr double kPrimitiveTol = 1e-4;
constexpr double kEndToEndTol = 1e-3;
constexpr std::size_t kPrimitiveSeeds = 5;
constexpr std::size_t kEndToEndSeeds = 8;
// 5
constexpr std::size_t kFrozenEpochs = 100;
constexpr double kParamGrowthLimit = 2.5;
// 6
constexpr std::size_t kEffNodes = 12;
constexpr std::size_t kEffLength = 1000;
constexpr std::size_t kEffWindow = 12;
constexpr std::size_t kEffTunnels = 4;
constexpr std::size_t kEffEpochs = 30;
constexpr double kEffOracleFactor = 1.5;
constexpr double kEffBudget = 30.0 * 60.0;
// 7
constexpr std::size_t kSweepTimesteps = 25;
constexpr double kSimplexTol = 1e-9;
// 8
constexpr double kAugmentationSigmas = 5.0;
// 9
constexpr std::size_t kPermutations = 100;
constexpr double kEquivarianceTol = 1e-6;

struct Outcome {
  bool pass = false;
  std::string detail;
};

class Clock {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

std::size_t workers() { return std::max(1u, std::thread::hardware_concurrency()); }

model::ModelConfig small_model(std::size_t window) {
  model::ModelConfig c;
  c.encoder.gnn_dim = 4;
  c.encoder.window = window;
  c.encoder.history_embed = 6;
  c.encoder.rnn_hidden = 5;
  c.encoder.rnn_dim = 6;
  c.encoder.fused_dim = 6;
  c.encoder.tunnel_hidden = 8;
  c.alignment.heads = 2;
  c.alignment.head_dim = 4;
  c.alignment.prototypes = 8;
  c.alignment.vocab_size = 128;
  c.backbone.layers = 2;
  c.backbone.model_dim = 16;
  c.backbone.heads = 2;
  c.backbone.mlp_hidden = 24;
  c.head.hidden = 12;
  c.head.pe_dim = 8;
  return c;
}

std::vector<net::TrafficMatrix> random_history(std::size_t n, std::size_t len, Rng& rng) {
  std::vector<net::TrafficMatrix> h;
  for (std::size_t i = 0; i < len; ++i) h.push_back(testing::random_tm(n, rng, 0.5, 3.0));
  return h;
}

Outcome fig3_fixture() {
  Clock clock;
  const auto topo = testing::fig3_topology();
  const auto tunnels = net::select_tunnels(topo, 2);
  const auto samples = testing::fig3_samples(topo);
  const auto p = testing::fig3_pairs(tunnels, topo);

  // Gate: the 0.01 grid over the two direct-tunnel shares.
  auto cfg = net::uniform_config(tunnels);
  double best = std::numeric_limits<double>::infinity(), ga = -1, gb = -1;
  for (int i = 0; i <= 100; ++i) {
    for (int j = 0; j <= 100; ++j) {
      cfg.ratios[p.a] = {i / 100.0, 1.0 - i / 100.0};
      cfg.ratios[p.b] = {j / 100.0, 1.0 - j / 100.0};
      const double v = oracle::expected_mlu(topo, tunnels, samples, cfg);
      if (v < best - 1e-12) {
        best = v;
        ga = i / 100.0;
        gb = j / 100.0;
      }
    }
  }
  const bool gate = std::abs(ga - kFig3Target) <= kFig3GridTol && std::abs(gb - kFig3Target) <= kFig3GridTol;

  oracle::SolverSettings st;
  st.step_size = 0.05;
  st.max_steps = 20000;
  const auto r = oracle::solve_expected(topo, tunnels, samples, st);
  const double sa = r.cfg.ratios[p.a][0], sb = r.cfg.ratios[p.b][0];
  const bool solver = std::abs(sa - kFig3Target) <= kFig3SolverTol && std::abs(sb - kFig3Target) <= kFig3SolverTol;
  const double t = clock.seconds();
  std::ostringstream d;
  d << "grid optimum (" << ga << ", " << gb << ") E[MLU] " << fmt("%.4f", best) << (gate ? "" : " [gate failed]")
    << "; solver (" << fmt("%.4f", sa) << ", " << fmt("%.4f", sb) << ") E[MLU] " << fmt("%.4f", r.expected_mlu)
    << "; " << fmt("%.2f", t) << " s";
  return {gate && solver && t < kFig3Budget, d.str()};
}

Outcome brute_force() {
  Clock clock;
  std::size_t ok = 0;
  double worst = 0.0, ahead = 0.0;
  for (std::size_t seed = 0; seed < kBruteInstances; ++seed) {
    const auto inst = testing::small_instance(seed);
    const auto solved = oracle::solve_te(inst.topo, inst.tunnels, inst.tm, {});
    const auto seed_point = testing::round_to_grid(solved.cfg, 100);
    const auto grid = testing::grid_search(inst.topo, inst.tunnels, inst.tm, 100, &seed_point);
    // The continuous optimum can sit between grid points, so only a solver
    // that trails the grid counts against it.
    const double rel = grid.mlu > 0.0 ? (solved.mlu - grid.mlu) / grid.mlu : solved.mlu;
    worst = std::max(worst, rel);
    ahead = std::max(ahead, -rel);
    if (rel <= kBruteRelTol) ++ok;
  }
  const double t = clock.seconds();
  std::ostringstream d;
  d << ok << "/" << kBruteInstances << " within 1%, worst relative excess " << fmt("%.2e", worst)
    << ", solver ahead of grid by up to " << fmt("%.2e", ahead) << "; "
    << fmt("%.2f", t) << " s";
  return {ok == kBruteInstances && t < kBruteBudget, d.str()};
}

Outcome automata() {
  Rng rng = make_rng(derive_seed(3, "acceptance.automata"));
  std::size_t identical = 0, depth_ok = 0;
  for (std::size_t i = 0; i < kAutomata; ++i) {
    const std::size_t q = std::uniform_int_distribution<std::size_t>(1, kMaxStates)(rng);
    const std::size_t sigma = std::uniform_int_distribution<std::size_t>(1, 8)(rng);
    const std::size_t len = std::uniform_int_distribution<std::size_t>(1, kMaxLength)(rng);
    std::uniform_int_distribution<oracle::State> state(0, static_cast<oracle::State>(q - 1));
    std::vector<std::vector<oracle::State>> tables(sigma, std::vector<oracle::State>(q));
    for (auto& t : tables)
      for (auto& s : t) s = state(rng);
    const oracle::FiniteAutomaton a(q, std::move(tables));
    std::vector<oracle::Symbol> word(len);
    std::uniform_int_distribution<oracle::Symbol> sym(0, static_cast<oracle::Symbol>(sigma - 1));
    for (auto& w : word) w = sym(rng);
    const oracle::State q0 = state(rng);
    const auto par = oracle::parallel_simulate(a, word, q0, i % 2 ? 4 : 1);
    if (par.trajectory == oracle::sequential_simulate(a, word, q0)) ++identical;
    std::size_t levels = 0;
    while ((std::size_t{1} << levels) < len) ++levels;
    if (par.levels == levels) ++depth_ok;
  }
  std::ostringstream d;
  d << identical << "/" << kAutomata << " bit-identical, " << depth_ok << "/" << kAutomata
    << " with ceil(log2 T) levels";
  return {identical == kAutomata && depth_ok == kAutomata, d.str()};
}

Outcome gradients() {
  double prim_worst = 0.0;
  std::size_t prim_bad = 0, prim_total = 0;
  for (const auto& c : testing::primitive_cases()) {
    for (std::size_t s = 0; s < kPrimitiveSeeds; ++s) {
      Rng rng = make_rng(s * 31 + 7);
      const auto r = c.run(rng);
      ++prim_total;
      prim_worst = std::max(prim_worst, r.max_rel_error);
      if (r.unreliable || r.max_rel_error >= kPrimitiveTol) ++prim_bad;
    }
  }

  // model_forward o mlu_loss at smooth points: seeds whose evaluation
  // passes within 2 eps of a relu kink or max tie are reported and skipped.
  double e2e_worst = 0.0;
  std::size_t reliable = 0, e2e_bad = 0;
  for (std::uint64_t seed = 0; seed < kEndToEndSeeds; ++seed) {
    Rng rng = make_rng(derive_seed(seed, "acceptance.e2e"));
    const auto topo = testing::random_bidirectional(5, 2, rng);
    const auto tunnels = net::select_tunnels(topo, 3);
    model::LmteModel m(topo, tunnels, small_model(3), seed);
    const auto history = random_history(5, 3, rng);
    const auto tm = testing::random_tm(5, rng, 0.5, 3.0);
    const auto layout = train::make_loss_layout(topo, tunnels);
    auto f = [&] { return train::mlu_loss(layout, tunnels, tm, m.forward(history, {}).ratios); };
    std::vector<ad::Tensor> inputs;
    for (const auto& p : m.params().entries())
      if (!m.params().is_frozen(p.group)) inputs.push_back(p.tensor);
    ad::GradCheckOptions opt;
    opt.max_components = 4;
    const auto r = ad::grad_check(f, inputs, opt);
    if (r.unreliable) continue;
    ++reliable;
    e2e_worst = std::max(e2e_worst, r.max_rel_error);
    if (r.max_rel_error >= kEndToEndTol) ++e2e_bad;
  }
  std::ostringstream d;
  d << "primitives " << prim_total - prim_bad << "/" << prim_total << " (worst " << fmt("%.2e", prim_worst)
    << "); end-to-end " << reliable - e2e_bad << "/" << reliable << " smooth points of " << kEndToEndSeeds
    << " (worst " << fmt("%.2e", e2e_worst) << ")";
  return {prim_bad == 0 && reliable >= kEndToEndSeeds / 2 && e2e_bad == 0, d.str()};
}

Outcome frozen_backbone() {
  const auto data = testing::gravity_dataset(6, 60, 3, 11);
  auto split = tm::split_dataset(data.series, {0.7, 0.1, 0.2});
  split.train.begin = 3;
  model::LmteModel m(data.topo, data.tunnels, small_model(3), 5);
  const auto backbone = m.params().checksum(model::kGroupBackbone);
  const auto protos = m.params().checksum(model::kGroupPrototypes);
  train::TrainSettings s;
  s.epochs = kFrozenEpochs;
  s.seed = 5;
  const auto trace = train::train(m, data.series, split, s);
  const bool unchanged = trace.frozen_checksum_before == trace.frozen_checksum_after &&
                         m.params().checksum(model::kGroupBackbone) == backbone &&
                         m.params().checksum(model::kGroupPrototypes) == protos;

  std::vector<std::size_t> counts;
  for (std::size_t n : {8u, 16u, 32u}) {
    Rng rng = make_rng(n);
    const auto topo = testing::random_bidirectional(n, n / 2, rng);
    const model::LmteModel big(topo, net::select_tunnels(topo, 4), model::ModelConfig{}, 1);
    counts.push_back(big.params().trainable_count());
  }
  const double r1 = static_cast<double>(counts[1]) / counts[0], r2 = static_cast<double>(counts[2]) / counts[1];
  std::ostringstream d;
  d << kFrozenEpochs << " epochs, frozen checksums " << (unchanged ? "unchanged" : "CHANGED")
    << "; trainable parameters " << counts[0] << " / " << counts[1] << " / " << counts[2] << " (ratios "
    << fmt("%.3f", r1) << ", " << fmt("%.3f", r2) << ")";
  return {unchanged && r1 <= kParamGrowthLimit && r2 <= kParamGrowthLimit, d.str()};
}

struct EfficacyState {
  testing::Dataset data;
  tm::DatasetSplit split;
  std::unique_ptr<model::LmteModel> trained;
  double normal_mean = 0.0;
};

Outcome efficacy(EfficacyState& st) {
  Clock clock;
  st.data = testing::gravity_dataset(kEffNodes, kEffLength, kEffTunnels, 2024);
  st.split = tm::split_dataset(st.data.series, {0.7, 0.1, 0.2});
  st.split.train.begin = kEffWindow;
  model::ModelConfig cfg;
  cfg.encoder.window = kEffWindow;
  const model::LmteModel untrained(st.data.topo, st.data.tunnels, cfg, 17);
  st.trained = std::make_unique<model::LmteModel>(st.data.topo, st.data.tunnels, cfg, 17);
  train::TrainSettings s;
  s.epochs = kEffEpochs;
  s.seed = 17;
  const auto trace = train::train(*st.trained, st.data.series, st.split, s);
  const double train_time = clock.seconds();

  train::EvalOptions opt;
  opt.workers = workers();
  auto run = [&](train::Policy p, const model::LmteModel* m) {
    return train::evaluate(st.data.topo, st.data.tunnels, st.data.series, st.split.test, kEffWindow, {}, p, m, opt);
  };
  const auto trained = run(train::Policy::model, st.trained.get());
  const auto before = run(train::Policy::model, &untrained);
  const auto uniform = run(train::Policy::uniform, nullptr);
  st.normal_mean = trained.aggregates.mean;
  const double t = clock.seconds();
  const double tm_ = trained.aggregates.mean, um = before.aggregates.mean, un = uniform.aggregates.mean;
  std::ostringstream d;
  d << "normalized MLU trained " << fmt("%.4f", tm_) << ", untrained " << fmt("%.4f", um) << ", uniform "
    << fmt("%.4f", un) << " (best epoch " << trace.best_epoch << ", " << trained.aggregates.excluded
    << " non-converged oracle rows); train " << fmt("%.0f", train_time) << " s, total " << fmt("%.0f", t) << " s";
  return {tm_ < um && tm_ < un && tm_ <= kEffOracleFactor && t < kEffBudget, d.str()};
}

Outcome failures(const EfficacyState& st) {
  if (!st.trained) return {false, "needs the trained model of criterion 6"};
  train::EvalOptions opt;
  opt.workers = workers();
  opt.max_timesteps = kSweepTimesteps;
  train::Scenario sc;
  sc.kind = train::ScenarioKind::single_failure;
  std::size_t violations = 0, checked = 0;
  train::EvalReport rep;
  try {
    rep = train::evaluate(st.data.topo, st.data.tunnels, st.data.series, st.split.test, kEffWindow, sc,
                          train::Policy::model, st.trained.get(), opt);
  } catch (const std::exception& e) {
    return {false, std::string("single-failure sweep threw: ") + e.what()};
  }
  // Independent simplex audit of the post-processed configurations.
  const auto links = train::critical_links(st.data.topo, st.data.tunnels, st.data.series, st.split.test, opt.solver,
                                           opt.critical_links);
  for (const auto& link : links) {
    for (std::size_t t = st.split.test.begin; t < st.split.test.end; t += st.split.test.size() / kSweepTimesteps) {
      const std::span<const net::TrafficMatrix> h(st.data.series.matrices.data() + t - kEffWindow, kEffWindow);
      model::Constraints c;
      c.failed_links = link;
      const auto out = net::apply_failures(st.data.topo, st.data.tunnels, st.trained->infer(h, c), link);
      ++checked;
      for (const auto& row : out.config.ratios) {
        double sum = 0.0;
        for (double r : row) {
          if (!(r >= 0.0)) ++violations;
          sum += r;
        }
        if (std::abs(sum - 1.0) > kSimplexTol) ++violations;
      }
    }
  }

  // A bridge makes some pairs unreachable; they must be reported.
  const auto bridge = net::Topology::create({"a", "b", "c", "d"}, {{0, 1, 5.0},
                                                                    {1, 0, 5.0},
                                                                    {1, 2, 5.0},
                                                                    {2, 1, 5.0},
                                                                    {2, 3, 5.0},
                                                                    {3, 2, 5.0},
                                                                    {1, 3, 5.0},
                                                                    {3, 1, 5.0}});
  const auto bt = net::select_tunnels(bridge, 3);
  tm::GravitySpec g;
  g.node_masses = tm::default_masses(bridge);
  g.total_volume = 6.0;
  g.noise_std = 0.05;
  const auto bs = tm::generate_gravity_series(bridge, g, 40);
  const model::LmteModel bm(bridge, bt, small_model(3), 3);
  train::EvalOptions bopt;
  bopt.critical_links = 10;
  std::size_t disconnected = 0;
  bool bridge_ok = true;
  try {
    const auto br = train::evaluate(bridge, bt, bs, {30, 40}, 3, sc, train::Policy::model, &bm, bopt);
    disconnected = br.disconnected_pairs;
    for (const auto& row : br.rows) bridge_ok = bridge_ok && std::isfinite(row.mlu);
  } catch (const std::exception& e) {
    bridge_ok = false;
  }

  const double degradation = 100.0 * (rep.aggregates.mean - st.normal_mean) / st.normal_mean;
  std::ostringstream d;
  d << rep.rows.size() << " failure rows, " << checked << " configs audited, " << violations
    << " simplex violations; bridge case reports " << disconnected << " disconnected pair-rows"
    << "; mean normalized MLU " << fmt("%.4f", rep.aggregates.mean) << " vs normal " << fmt("%.4f", st.normal_mean)
    << " (degradation " << fmt("%+.2f", degradation) << "%)";
  return {violations == 0 && checked > 0 && bridge_ok && disconnected > 0 && std::isfinite(degradation), d.str()};
}

Outcome protocol() {
  const fs::path dir = fs::temp_directory_path() / "telab_acceptance_protocol";
  fs::remove_all(dir);
  fs::create_directories(dir);
  Rng rng = make_rng(8);
  const auto topo = testing::random_bidirectional(6, 3, rng);
  net::write_text_file(dir / "topo.json", net::topology_to_json(topo));
  nlohmann::json cfg;
  cfg["seed"] = 8;
  cfg["window"] = 12;
  cfg["split"] = {0.7, 0.1, 0.2};
  cfg["data"] = {{"length", 240}};
  cfg["train"] = {{"epochs", 10}, {"batch_size", 1}, {"augmentation_probability", 0.1}};
  cfg["scenario"] = {{"kind", "drift"}, {"drift_segment", "25-50"}, {"burst_scale", 20.0}};
  cfg["model"] = {{"encoder", {{"gnn_dim", 4}, {"history_embed", 6}, {"rnn_hidden", 5}, {"rnn_dim", 6},
                               {"fused_dim", 6}, {"tunnel_hidden", 8}}},
                  {"alignment", {{"heads", 2}, {"head_dim", 4}, {"prototypes", 8}, {"vocab_size", 128}}},
                  {"backbone", {{"layers", 1}, {"model_dim", 16}, {"heads", 2}, {"mlp_hidden", 24}}},
                  {"head", {{"hidden", 12}, {"pe_dim", 8}}}};
  net::write_text_file(dir / "experiment.json", cfg.dump());

  std::ostringstream out, err;
  const std::string topo_path = (dir / "topo.json").string(), exp = (dir / "experiment.json").string();
  const std::string data = (dir / "data").string(), trained = (dir / "train").string(),
                    burst = (dir / "burst").string();
  if (cli::run_command({"gen-data", "-c", exp, "--nodes-from", topo_path, "-o", data}, out, err) != 0 ||
      cli::run_command({"train", "-c", exp, "--topology", topo_path, "--series", data + "/series.csv", "-o", trained},
                       out, err) != 0 ||
      cli::run_command({"eval", "-c", exp, "--topology", topo_path, "--series", data + "/series.csv", "--policy",
                        "uniform", "--scenario", "burst", "--max-timesteps", "5", "-o", burst},
                       out, err) != 0) {
    return {false, "command failed: " + err.str()};
  }
  const auto prov = nlohmann::json::parse(net::read_text_file(trained + "/provenance.json"));
  const auto eval_prov = nlohmann::json::parse(net::read_text_file(burst + "/provenance.json"));
  const auto& c = prov["config"];
  std::vector<std::string> missing;
  auto expect = [&](bool ok, const char* what) {
    if (!ok) missing.push_back(what);
  };
  expect(c["window"] == 12, "window");
  expect(c["split"] == nlohmann::json({0.7, 0.1, 0.2}), "split");
  expect(c["train"]["augmentation_probability"] == 0.1, "augmentation probability");
  expect(c["scenario"]["drift_segment"] == "25-50", "drift segment");
  expect(prov["summary"]["split"]["train"] == "[60,120)", "drift training range");
  expect(prov["protocol"]["burst_scales"] == nlohmann::json({2.0, 5.0, 10.0, 20.0, 30.0}), "burst scale set");
  expect(prov["protocol"]["drift_segments"] == nlohmann::json({"0-25", "25-50", "50-75"}), "drift segments");
  expect(eval_prov["config"]["scenario"]["burst_scale"] == 20.0, "eval burst scale");
  expect(eval_prov["summary"]["scenario"] == "burst-20", "eval scenario tag");

  const double n = prov["summary"]["batches"].get<double>();
  const double k = prov["summary"]["augmented_batches"].get<double>();
  const double p = 0.1, z = (k - n * p) / std::sqrt(n * p * (1 - p));
  fs::remove_all(dir);
  std::ostringstream d;
  d << (missing.empty() ? "all protocol fields present" : "missing:");
  for (const auto& m : missing) d << ' ' << m << ';';
  d << "; augmented " << k << " of " << n << " batches (z = " << fmt("%+.2f", z) << ")";
  return {missing.empty() && std::abs(z) <= kAugmentationSigmas, d.str()};
}

Outcome equivariance() {
  std::size_t mlu_exact = 0, model_ok = 0;
  double worst = 0.0;
  for (std::size_t i = 0; i < kPermutations; ++i) {
    Rng rng = make_rng(derive_seed(i, "acceptance.equivariance"));
    const std::size_t n = 4 + i % 4;
    const auto topo = testing::random_bidirectional(n, n / 2, rng);
    const auto tunnels = net::select_tunnels(topo, 3);
    const auto tm = testing::random_tm(n, rng, 0.0, 5.0);
    const auto cfg = testing::random_config(tunnels, rng);
    auto perm = testing::random_permutation(n, rng);
    const auto ptopo = testing::permute(topo, perm);

    const auto same_order = testing::permute(tunnels, perm, false);
    const double a = net::evaluate_mlu(topo, tunnels, tm, cfg).mlu;
    const double b = net::evaluate_mlu(ptopo, same_order, testing::permute(tm, perm), cfg).mlu;
    if (a == b) ++mlu_exact;

    const auto ptunnels = testing::permute(tunnels, perm, true);
    const model::LmteModel ma(topo, tunnels, small_model(3), 99), mb(ptopo, ptunnels, small_model(3), 99);
    const auto history = random_history(n, 3, rng);
    std::vector<net::TrafficMatrix> phistory;
    for (const auto& h : history) phistory.push_back(testing::permute(h, perm));
    const auto fa = ma.forward(history, {}), fb = mb.forward(phistory, {});
    const auto images = testing::tunnel_images(tunnels, ptunnels, perm);
    std::vector<std::size_t> offset{0};
    for (const auto& pr : ptunnels.pairs) offset.push_back(offset.back() + pr.tunnels.size());
    double dev = 0.0;
    const auto& ea = fa.topology.tunnel_embeddings;
    const auto& eb = fb.topology.tunnel_embeddings;
    for (std::size_t row = 0; row < images.size(); ++row) {
      const std::size_t image = offset[images[row].first] + images[row].second;
      for (std::size_t c = 0; c < ea.cols(); ++c) dev = std::max(dev, std::abs(ea.at(row, c) - eb.at(image, c)));
    }
    const auto mapped = testing::permute(model::to_config(fa.ratios, tunnels), tunnels, ptunnels, perm);
    const auto cb = model::to_config(fb.ratios, ptunnels);
    for (std::size_t p = 0; p < cb.ratios.size(); ++p)
      for (std::size_t j = 0; j < cb.ratios[p].size(); ++j)
        dev = std::max(dev, std::abs(mapped.ratios[p][j] - cb.ratios[p][j]));
    worst = std::max(worst, dev);
    if (dev <= kEquivarianceTol) ++model_ok;
  }
  std::ostringstream d;
  d << "MLU exact " << mlu_exact << "/" << kPermutations << ", embeddings and configs within 1e-6 " << model_ok
    << "/" << kPermutations << " (worst " << fmt("%.2e", worst) << ")";
  return {mlu_exact == kPermutations && model_ok == kPermutations, d.str()};
}

}  // namespace

// Optional arguments select criteria by number; criterion 7 reuses the
// model trained by criterion 6.
int main(int argc, char** argv) {
  std::set<std::size_t> only;
  for (int i = 1; i < argc; ++i) only.insert(std::stoul(argv[i]));
  EfficacyState state;
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"fig3 fixture", fig3_fixture},
      {"oracle vs brute force", brute_force},
      {"parallel automaton", automata},
      {"gradient fidelity", gradients},
      {"frozen backbone", frozen_backbone},
      {"learning efficacy", [&] { return efficacy(state); }},
      {"failure handling", [&] { return failures(state); }},
      {"protocol fidelity", protocol},
      {"equivariance", equivariance},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (!only.empty() && !only.count(i + 1)) continue;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << i + 1 << " (" << criteria[i].first
              << "): " << o.detail << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
