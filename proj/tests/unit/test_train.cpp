#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "telab/ad/ops.hpp"
#include "telab/common/error.hpp"
#include "telab/net/failures.hpp"
#include "telab/net/mlu.hpp"
#include "telab/oracle/automaton.hpp"
#include "telab/train/evaluate.hpp"
#include "telab/train/loss.hpp"
#include "telab/train/trainer.hpp"

namespace telab::train {
namespace {

using ad::Tensor;

model::ModelConfig tiny_config() {
  model::ModelConfig c;
  c.encoder.gnn_layers = 2;
  c.encoder.gnn_dim = 4;
  c.encoder.window = 3;
  c.encoder.history_embed = 6;
  c.encoder.rnn_hidden = 5;
  c.encoder.rnn_dim = 6;
  c.encoder.fused_dim = 6;
  c.encoder.tunnel_hidden = 8;
  c.alignment.heads = 2;
  c.alignment.head_dim = 4;
  c.alignment.prototypes = 8;
  c.alignment.vocab_size = 128;
  c.backbone.layers = 1;
  c.backbone.model_dim = 16;
  c.backbone.heads = 2;
  c.backbone.mlp_hidden = 24;
  c.backbone.max_sequence = 128;
  c.head.hidden = 12;
  c.head.pe_dim = 8;
  c.max_prompt_tokens = 96;
  return c;
}

TEST(Loss, MatchesEvaluatorOnRandomInstances) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng = make_rng(seed);
    const auto topo = testing::random_topology(3 + seed % 5, 0.3, rng);
    const auto set = net::select_tunnels(topo, 1 + seed % 4);
    const auto tm = testing::random_tm(topo.node_count(), rng, 0.0, 4.0);
    const auto cfg = testing::random_config(set, rng);
    const double ref = net::evaluate_mlu(topo, set, tm, cfg).mlu;
    const double got = mlu_loss(topo, set, tm, config_tensor(set, cfg)).item();
    EXPECT_NEAR(got, ref, 1e-9 * std::max(1.0, ref)) << "seed " << seed;
  }
}

TEST(Loss, ZeroDemandGivesZeroLossAndGradient) {
  Rng rng = make_rng(1);
  const auto topo = testing::random_topology(5, 0.3, rng);
  const auto set = net::select_tunnels(topo, 3);
  const auto fixed = config_tensor(set, net::uniform_config(set));
  auto r = Tensor::variable(fixed.shape(), std::vector<double>(fixed.values().begin(), fixed.values().end()));
  const auto loss = mlu_loss(topo, set, net::TrafficMatrix(5), r);
  EXPECT_EQ(loss.item(), 0.0);
  ad::backward(loss);
  for (double g : r.grad()) EXPECT_EQ(g, 0.0);
}

TEST(Loss, GradientIsTheMluSubgradient) {
  std::size_t checked = 0;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Rng rng = make_rng(seed + 100);
    const auto topo = testing::random_topology(5, 0.35, rng);
    const auto set = net::select_tunnels(topo, 3);
    const auto tm = testing::random_tm(5, rng, 0.5, 3.0);
    const auto cfg = testing::random_config(set, rng);
    const auto at = net::evaluate_mlu(topo, set, tm, cfg);
    // Skip ties for the bottleneck, where the two are different subgradients.
    std::size_t tied = 0;
    for (std::size_t e = 0; e < at.flows.size(); ++e)
      if (at.flows[e] / topo.edge(e).capacity > at.mlu - 1e-9) ++tied;
    if (tied != 1) continue;

    const auto fixed = config_tensor(set, cfg);
    auto r = Tensor::variable(fixed.shape(), std::vector<double>(fixed.values().begin(), fixed.values().end()));
    ad::backward(mlu_loss(topo, set, tm, r));
    const auto sub = oracle::mlu_subgradient(topo, set, tm, cfg);
    for (std::size_t i = 0; i < set.pairs.size(); ++i)
      for (std::size_t j = 0; j < fixed.cols(); ++j) {
        const double expect = j < sub[i].size() ? sub[i][j] : 0.0;
        EXPECT_NEAR(r.grad()[i * fixed.cols() + j], expect, 1e-12);
      }

    // Through a row softmax: dL/dz_j = r_j (g_j - sum_k r_k g_k).
    std::vector<double> z(fixed.size());
    for (auto& v : z) v = std::normal_distribution<double>()(rng);
    auto logits = Tensor::variable(fixed.shape(), z);
    const auto soft = ad::row_softmax(logits);
    const auto masked = mul(soft, Tensor::constant(fixed.shape(), [&] {
                              std::vector<double> m(fixed.size(), 0.0);
                              for (std::size_t i = 0; i < set.pairs.size(); ++i)
                                for (std::size_t j = 0; j < set.pairs[i].tunnels.size(); ++j) m[i * fixed.cols() + j] = 1.0;
                              return m;
                            }()));
    // Renormalize over real tunnels so the rows stay on the simplex.
    const auto rows = ad::reduce_sum(masked, ad::Reduce::over_cols);
    net::TeConfig soft_cfg;
    std::vector<double> ones(fixed.cols(), 1.0);
    const auto ratios = ad::divide(masked, ad::matmul(rows, Tensor::constant({1, fixed.cols()}, ones)));
    for (std::size_t i = 0; i < set.pairs.size(); ++i) {
      std::vector<double> row;
      for (std::size_t j = 0; j < set.pairs[i].tunnels.size(); ++j) row.push_back(ratios.at(i, j));
      soft_cfg.ratios.push_back(row);
    }
    const auto at2 = net::evaluate_mlu(topo, set, tm, soft_cfg);
    tied = 0;
    for (std::size_t e = 0; e < at2.flows.size(); ++e)
      if (at2.flows[e] / topo.edge(e).capacity > at2.mlu - 1e-9) ++tied;
    if (tied != 1) continue;
    ad::backward(mlu_loss(topo, set, tm, ratios));
    const auto g = oracle::mlu_subgradient(topo, set, tm, soft_cfg);
    for (std::size_t i = 0; i < set.pairs.size(); ++i) {
      double dot = 0.0;
      for (std::size_t j = 0; j < g[i].size(); ++j) dot += soft_cfg.ratios[i][j] * g[i][j];
      for (std::size_t j = 0; j < g[i].size(); ++j) {
        EXPECT_NEAR(logits.grad()[i * fixed.cols() + j], soft_cfg.ratios[i][j] * (g[i][j] - dot), 1e-10);
      }
    }
    ++checked;
  }
  EXPECT_GE(checked, 10u);
}

TEST(Loss, DroppedPairsCarryNoDemand) {
  const auto topo = net::Topology::create({"a", "b", "c"}, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 4.0}});
  const auto set = net::select_tunnels(topo, 2);
  net::TrafficMatrix tm(3);
  tm(0, 1) = 0.5;
  tm(1, 2) = 0.25;
  const auto layout = make_loss_layout(topo, set);
  const auto r = config_tensor(set, net::uniform_config(set));
  EXPECT_NEAR(mlu_loss(layout, set, tm, r).item(), 0.5, 1e-15);
  std::size_t ab = 0;
  for (std::size_t i = 0; i < set.pairs.size(); ++i)
    if (set.pairs[i].src == 0 && set.pairs[i].dst == 1) ab = i;
  EXPECT_NEAR(mlu_loss(layout, set, tm, r, {ab}).item(), 0.25, 1e-15);
}

struct TrainBench {
  testing::Dataset data;
  tm::DatasetSplit split;
  explicit TrainBench(std::size_t length = 80, std::uint64_t seed = 5)
      : data(testing::gravity_dataset(6, length, 3, seed)) {
    split = tm::split_dataset(data.series, {0.7, 0.1, 0.2});
    split.train.begin = 3;  // history lead-in
  }
  std::unique_ptr<model::LmteModel> fresh(std::uint64_t seed = 1) const {
    return std::make_unique<model::LmteModel>(data.topo, data.tunnels, tiny_config(), seed);
  }
};

TEST(Trainer, DeterministicForSeed) {
  TrainBench b;
  TrainSettings s;
  s.epochs = 3;
  s.seed = 9;
  auto m1 = b.fresh(), m2 = b.fresh();
  const auto t1 = train(*m1, b.data.series, b.split, s);
  const auto t2 = train(*m2, b.data.series, b.split, s);
  EXPECT_EQ(m1->params().checksum(), m2->params().checksum());
  EXPECT_EQ(t1.to_csv(), t2.to_csv());
  ASSERT_EQ(t1.epochs.size(), 4u);
  EXPECT_EQ(t1.epochs[0].batches, 0u);
}

TEST(Trainer, NoAugmentationAtZeroProbability) {
  TrainBench b;
  TrainSettings s;
  s.epochs = 2;
  s.augmentation_probability = 0.0;
  auto m = b.fresh();
  const auto t = train(*m, b.data.series, b.split, s);
  EXPECT_EQ(t.augmented_batches, 0u);
  EXPECT_GT(t.batches, 0u);
}

TEST(Trainer, AugmentationFrequencyIsBinomial) {
  TrainBench b;
  TrainSettings s;
  s.epochs = 12;
  s.batch_size = 1;
  s.augmentation_probability = 0.3;
  s.max_validation_samples = 2;
  auto m = b.fresh();
  const auto t = train(*m, b.data.series, b.split, s);
  const double n = static_cast<double>(t.batches), p = s.augmentation_probability;
  EXPECT_LE(std::abs(static_cast<double>(t.augmented_batches) - n * p), 5.0 * std::sqrt(n * p * (1 - p)));
  std::size_t failure = 0, burst = 0;
  for (const auto& e : t.epochs) {
    failure += e.failure_batches;
    burst += e.burst_batches;
  }
  EXPECT_GT(failure, 0u);
  EXPECT_GT(burst, 0u);
}

TEST(Trainer, FrozenGroupsStayFixedAndBestIsKept) {
  TrainBench b;
  TrainSettings s;
  s.epochs = 4;
  s.augmentation_probability = 0.5;
  auto m = b.fresh();
  const auto frozen_backbone = m->params().checksum(model::kGroupBackbone);
  const auto frozen_protos = m->params().checksum(model::kGroupPrototypes);
  const auto t = train(*m, b.data.series, b.split, s);
  EXPECT_EQ(t.frozen_checksum_before, t.frozen_checksum_after);
  EXPECT_EQ(m->params().checksum(model::kGroupBackbone), frozen_backbone);
  EXPECT_EQ(m->params().checksum(model::kGroupPrototypes), frozen_protos);
  for (const auto& e : t.epochs) EXPECT_LE(t.best_validation_mlu, e.validation_mlu);
  const auto val = validation_windows(b.data.series, b.split.validation, 3, 0);
  EXPECT_DOUBLE_EQ(mean_model_mlu(*m, val), t.best_validation_mlu);
}

TEST(Trainer, ValidationOracleGivesRatios) {
  TrainBench b;
  TrainSettings s;
  s.epochs = 1;
  const auto val = validation_windows(b.data.series, b.split.validation, 3, 0);
  auto m = b.fresh();
  EXPECT_THROW(train(*m, b.data.series, b.split, s, std::vector<double>(val.size() + 1, 1.0)), ShapeError);
  const auto t = train(*m, b.data.series, b.split, s, std::vector<double>(val.size(), 1e-3));
  ASSERT_TRUE(t.epochs[1].validation_ratio.has_value());
  EXPECT_GT(*t.epochs[1].validation_ratio, 1.0);
}

TEST(Trainer, SettingsValidation) {
  TrainSettings s;
  s.batch_size = 0;
  EXPECT_THROW(s.validate(), ValidationError);
  s = {};
  s.augmentation_probability = 1.5;
  EXPECT_THROW(s.validate(), ValidationError);
  s = {};
  s.learning_rate = 0.0;
  EXPECT_THROW(s.validate(), ValidationError);
}

TEST(Evaluate, OracleAgainstItself) {
  TrainBench b;
  EvalOptions opt;
  const auto r = evaluate(b.data.topo, b.data.tunnels, b.data.series, b.split.test, 3, {}, Policy::oracle,
                          nullptr, opt);
  EXPECT_EQ(r.rows.size(), b.split.test.size());
  EXPECT_NEAR(r.aggregates.mean, 1.0, 1e-3);
  EXPECT_EQ(r.scenario, "normal");
  EXPECT_EQ(r.policy, "oracle");
}

TEST(Evaluate, TrainedModelBeatsUniform) {
  TrainBench b(200);
  TrainSettings s;
  s.epochs = 15;
  s.learning_rate = 1e-2;
  auto m = b.fresh();
  train(*m, b.data.series, b.split, s);
  EvalOptions opt;
  const auto uni = evaluate(b.data.topo, b.data.tunnels, b.data.series, b.split.test, 3, {}, Policy::uniform,
                            nullptr, opt);
  const auto mod = evaluate(b.data.topo, b.data.tunnels, b.data.series, b.split.test, 3, {}, Policy::model,
                            m.get(), opt);
  EXPECT_LE(mod.aggregates.mean, uni.aggregates.mean);
  EXPECT_GE(mod.aggregates.mean, 1.0 - 1e-3);
}

TEST(Evaluate, BurstScenarioTagsAndConstraint) {
  TrainBench b;
  Scenario sc;
  sc.kind = ScenarioKind::burst;
  sc.burst_scale = 20.0;
  EXPECT_EQ(sc.tag(), "burst-20");
  auto m = b.fresh();
  EvalOptions opt;
  opt.max_timesteps = 4;
  const auto r = evaluate(b.data.topo, b.data.tunnels, b.data.series, b.split.test, 3, sc, Policy::model, m.get(), opt);
  EXPECT_EQ(r.rows.size(), 4u);
  sc.burst_scale = 7.0;
  EXPECT_THROW(sc.validate(), ValidationError);
  EXPECT_THROW(evaluate(b.data.topo, b.data.tunnels, b.data.series, b.split.test, 3, {}, Policy::model, nullptr, opt),
               ValidationError);
}

TEST(Evaluate, AggregatesUseNearestRankAndSkipNonConverged) {
  std::vector<EvalRow> rows;
  for (int i = 1; i <= 20; ++i) {
    EvalRow r;
    r.ratio = i;
    rows.push_back(r);
  }
  EvalRow bad;
  bad.ratio = 1000.0;
  bad.oracle_converged = false;
  rows.push_back(bad);
  const auto a = aggregate(rows);
  EXPECT_EQ(a.count, 20u);
  EXPECT_EQ(a.excluded, 1u);
  EXPECT_DOUBLE_EQ(a.mean, 10.5);
  EXPECT_DOUBLE_EQ(a.median, 10.5);
  EXPECT_DOUBLE_EQ(a.p95, 19.0);
}

TEST(Evaluate, SingleFailureSweep) {
  TrainBench b;
  auto m = b.fresh();
  Scenario sc;
  sc.kind = ScenarioKind::single_failure;
  EvalOptions opt;
  opt.critical_links = 3;
  opt.max_timesteps = 2;
  const auto r = evaluate(b.data.topo, b.data.tunnels, b.data.series, b.split.test, 3, sc, Policy::model, m.get(), opt);
  EXPECT_EQ(r.rows.size(), 6u);
  for (const auto& row : r.rows) {
    EXPECT_FALSE(row.condition.empty());
    EXPECT_TRUE(std::isfinite(row.mlu));
    EXPECT_GE(row.ratio, 1.0 - 1e-3);
  }
  const auto links = critical_links(b.data.topo, b.data.tunnels, b.data.series, b.split.test, opt.solver, 3);
  EXPECT_EQ(links.size(), 3u);
  for (const auto& l : links) EXPECT_EQ(l.size(), 2u);
}

TEST(Evaluate, PolicyNames) {
  for (Policy p : {Policy::model, Policy::oracle, Policy::uniform, Policy::predictive})
    EXPECT_EQ(parse_policy(to_string(p)), p);
  EXPECT_THROW(parse_policy("greedy"), ValidationError);
}

}  // namespace
}  // namespace telab::train
