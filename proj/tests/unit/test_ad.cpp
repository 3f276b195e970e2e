#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <functional>
#include <set>

#include "primitive_cases.hpp"
#include "telab/ad/checkpoint.hpp"
#include "telab/ad/grad_check.hpp"
#include "telab/ad/ops.hpp"
#include "telab/ad/optimizer.hpp"
#include "telab/ad/parameters.hpp"
#include "telab/common/error.hpp"
#include "telab/common/rng.hpp"

namespace telab::ad {
namespace {

constexpr double kPrimitiveTol = 1e-4;

std::vector<double> gaussian(std::size_t n, Rng& rng, double mean = 0.0, double sd = 1.0) {
  std::normal_distribution<double> d(mean, sd);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

Tensor var(Shape s, Rng& rng, double mean = 0.0, double sd = 1.0) {
  return Tensor::variable(s, gaussian(s.size(), rng, mean, sd));
}

TEST(Primitives, FiniteDifferenceAgreement) {
  for (const auto& c : testing::primitive_cases()) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      Rng rng = make_rng(seed * 31 + 7);
      const auto r = c.run(rng);
      EXPECT_FALSE(r.unreliable) << c.name << " seed " << seed;
      EXPECT_GT(r.components, 0u);
      EXPECT_LT(r.max_rel_error, kPrimitiveTol) << c.name << " seed " << seed;
    }
  }
}

TEST(Primitives, SoftmaxRowsSumToOne) {
  Rng rng = make_rng(1);
  const auto s = row_softmax(var({6, 9}, rng, 0.0, 30.0));
  for (std::size_t r = 0; r < 6; ++r) {
    double sum = 0.0;
    for (std::size_t c = 0; c < 9; ++c) sum += s.at(r, c);
    EXPECT_NEAR(sum, 1.0, 1e-12);
  }
}

TEST(Primitives, MatmulIdentity) {
  Rng rng = make_rng(2);
  const auto x = var({3, 4}, rng);
  std::vector<double> eye(16, 0.0);
  for (int i = 0; i < 4; ++i) eye[i * 5] = 1.0;
  const auto y = matmul(x, Tensor::constant({4, 4}, eye));
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_EQ(y.values()[i], x.values()[i]);
}

TEST(Primitives, ReduceMaxRoutesToFirstArgmax) {
  auto a = Tensor::variable({1, 4}, {1.0, 3.0, 3.0, 2.0});
  const auto m = reduce_max(a);
  EXPECT_EQ(m.item(), 3.0);
  backward(m);
  EXPECT_EQ(std::vector<double>(a.grad().begin(), a.grad().end()), (std::vector<double>{0, 1, 0, 0}));
}

TEST(Primitives, ShapeErrors) {
  const auto a = Tensor::constant({2, 3}), b = Tensor::constant({2, 2});
  EXPECT_THROW(matmul(a, a), ShapeError);
  EXPECT_THROW(add(a, b), ShapeError);
  EXPECT_THROW(add(a, Tensor::constant({2, 1})), ShapeError);
  EXPECT_THROW(reshape(a, {4, 2}), ShapeError);
  EXPECT_THROW(slice(a, Axis::cols, 2, 4), ShapeError);
  std::vector<Tensor> parts{a, b};
  EXPECT_THROW(concat(parts, Axis::rows), ShapeError);
  const std::vector<std::size_t> bad{2};
  EXPECT_THROW(embed_lookup(a, bad), ShapeError);
  EXPECT_THROW(Tensor::constant({2, 2}, std::vector<double>{1.0}), ShapeError);
}

TEST(Primitives, LayerNormNormalizesRows) {
  Rng rng = make_rng(3);
  const auto y = layer_norm(var({2, 8}, rng, 5.0, 3.0), Tensor::constant({1, 8}, 1.0), Tensor::constant({1, 8}, 0.0));
  for (std::size_t r = 0; r < 2; ++r) {
    double mean = 0.0, sq = 0.0;
    for (std::size_t c = 0; c < 8; ++c) mean += y.at(r, c) / 8.0;
    for (std::size_t c = 0; c < 8; ++c) sq += (y.at(r, c) - mean) * (y.at(r, c) - mean) / 8.0;
    EXPECT_NEAR(mean, 0.0, 1e-12);
    EXPECT_NEAR(sq, 1.0, 1e-4);
  }
}

TEST(Backward, SumGivesOnes) {
  auto w = Tensor::variable({2, 3}, std::vector<double>(6, 0.7));
  backward(reduce_sum(w));
  for (double g : w.grad()) EXPECT_EQ(g, 1.0);
}

TEST(Backward, DeadReluHasZeroGradient) {
  auto x = Tensor::variable({1, 3}, {0.5, -2.0, 1.5});
  const auto neg_abs = scale(mul(x, x), -1.0);
  backward(reduce_sum(relu(neg_abs)));
  for (double g : x.grad()) EXPECT_EQ(g, 0.0);
}

TEST(Backward, AccumulatesUntilZeroed) {
  auto x = Tensor::variable({1, 2}, {1.0, 2.0});
  backward(reduce_sum(mul(x, x)));
  backward(reduce_sum(mul(x, x)));
  EXPECT_EQ(x.grad()[0], 4.0);
  EXPECT_EQ(x.grad()[1], 8.0);
  x.zero_grad();
  backward(reduce_sum(x));
  EXPECT_EQ(x.grad()[1], 1.0);
}

TEST(Backward, SharedSubexpressionSumsPaths) {
  auto x = Tensor::variable({1, 1}, {3.0});
  const auto y = mul(x, x);
  backward(add(y, scale(y, 2.0)));
  EXPECT_DOUBLE_EQ(x.grad()[0], 3.0 * 2.0 * 3.0);
}

TEST(Backward, RejectsNonScalar) {
  auto x = Tensor::variable({1, 2}, {1.0, 2.0});
  EXPECT_THROW(backward(x), ShapeError);
}

TEST(Backward, NoGradGuardStopsRecording) {
  auto x = Tensor::variable({1, 2}, {1.0, 2.0});
  {
    NoGradGuard guard;
    EXPECT_FALSE(grad_enabled());
    EXPECT_FALSE(mul(x, x).requires_grad());
  }
  EXPECT_TRUE(grad_enabled());
  EXPECT_TRUE(mul(x, x).requires_grad());
}

TEST(Backward, ThreeLayerMlp) {
  Rng rng = make_rng(5);
  auto x = Tensor::constant({4, 3}, gaussian(12, rng));
  auto w1 = var({3, 8}, rng, 0.0, 0.5), b1 = var({1, 8}, rng, 0.0, 0.1);
  auto w2 = var({8, 8}, rng, 0.0, 0.5), b2 = var({1, 8}, rng, 0.0, 0.1);
  auto w3 = var({8, 1}, rng, 0.0, 0.5), b3 = var({1, 1}, rng);
  auto f = [=] {
    auto h = tanh(linear(x, w1, b1));
    h = tanh(linear(h, w2, b2));
    return reduce_sum(linear(h, w3, b3));
  };
  std::vector<Tensor> in{w1, b1, w2, b2, w3, b3};
  const auto r = grad_check(f, in);
  EXPECT_LT(r.max_rel_error, 1e-4);
  EXPECT_EQ(r.components, 3u * 8 + 8 + 64 + 8 + 8 + 1);
}

TEST(Backward, DeterministicGradients) {
  auto run = [] {
    Rng rng = make_rng(7);
    auto w = var({5, 5}, rng);
    auto x = Tensor::constant({3, 5}, gaussian(15, rng));
    backward(reduce_sum(row_softmax(matmul(x, w))));
    return std::vector<double>(w.grad().begin(), w.grad().end());
  };
  EXPECT_EQ(run(), run());
}

TEST(GradCheck, QuadraticIsExact) {
  Rng rng = make_rng(9);
  auto x = var({1, 6}, rng);
  std::vector<Tensor> in{x};
  EXPECT_LT(grad_check([=] { return reduce_sum(mul(x, x)); }, in).max_rel_error, 1e-8);
}

TEST(GradCheck, SoftmaxAgainstOneHotTargets) {
  Rng rng = make_rng(10);
  auto logits = var({4, 5}, rng);
  std::vector<double> onehot(20, 0.0);
  for (int r = 0; r < 4; ++r) onehot[r * 5 + (r * 2) % 5] = 1.0;
  const auto target = Tensor::constant({4, 5}, onehot);
  // Squared distance between the softmax rows and the one-hot labels.
  auto f = [=] {
    const auto diff = sub(row_softmax(logits), target);
    return reduce_sum(mul(diff, diff));
  };
  std::vector<Tensor> in{logits};
  EXPECT_LT(grad_check(f, in).max_rel_error, 1e-5);
}

TEST(GradCheck, FlagsReduceMaxTie) {
  auto x = Tensor::variable({1, 3}, {2.0, 2.0, 1.0});
  std::vector<Tensor> in{x};
  EXPECT_TRUE(grad_check([=] { return reduce_max(x); }, in).unreliable);
  auto y = Tensor::variable({1, 2}, {0.0, 1.0});
  std::vector<Tensor> in2{y};
  EXPECT_TRUE(grad_check([=] { return reduce_sum(relu(y)); }, in2).unreliable);
}

TEST(PositionalEncoding, Properties) {
  const auto p0 = sinusoidal_pe(0, 8);
  EXPECT_EQ(p0, (std::vector<double>{0, 1, 0, 1, 0, 1, 0, 1}));
  const auto p5 = sinusoidal_pe(5, 8);
  EXPECT_NEAR(p5[2], std::sin(5.0 / std::pow(10000.0, 2.0 / 8.0)), 1e-15);
  EXPECT_NEAR(p5[3], std::cos(5.0 / std::pow(10000.0, 2.0 / 8.0)), 1e-15);
  std::set<std::vector<double>> seen;
  for (std::size_t pos = 0; pos < 64; ++pos) {
    const auto v = sinusoidal_pe(pos, 32);
    for (double x : v) {
      EXPECT_LE(x, 1.0);
      EXPECT_GE(x, -1.0);
    }
    seen.insert(v);
  }
  EXPECT_EQ(seen.size(), 64u);
  EXPECT_THROW(sinusoidal_pe(1, 7), ShapeError);
  EXPECT_THROW(sinusoidal_pe(1, 0), ShapeError);
}

TEST(Parameters, GroupsCountsAndChecksums) {
  ParameterSet ps;
  Rng rng = make_rng(1);
  ps.add_gaussian("a", "enc", {3, 4}, 1.0, rng);
  ps.add_constant("b", "frozen", {2, 2}, 0.5);
  EXPECT_THROW(ps.add_constant("a", "enc", {1, 1}, 0.0), ValidationError);
  ps.set_frozen("frozen", true);
  EXPECT_TRUE(ps.is_frozen("frozen"));
  EXPECT_FALSE(ps.get("b").requires_grad());
  EXPECT_TRUE(ps.get("a").requires_grad());
  EXPECT_EQ(ps.total_count(), 16u);
  EXPECT_EQ(ps.trainable_count(), 12u);
  EXPECT_EQ(ps.count_in_group("frozen"), 4u);
  const auto before = ps.checksum("enc");
  auto a = ps.get("a");
  a.mutable_values()[0] += 1.0;
  EXPECT_NE(ps.checksum("enc"), before);
  const auto snap = ps.snapshot();
  a.mutable_values()[1] += 1.0;
  ps.restore(snap);
  EXPECT_EQ(ps.snapshot(), snap);
}

TEST(Adam, FirstStepMagnitudeIsLearningRate) {
  ParameterSet ps;
  auto w = ps.add("w", "g", {1, 1}, {0.0});
  AdamState st;
  st.lr = 0.001;
  backward(reduce_sum(w));
  optimizer_step(ps, st);
  EXPECT_NEAR(w.values()[0], -0.001, 1e-9);
  EXPECT_TRUE(w.grad().empty() || w.grad()[0] == 0.0);
}

TEST(Adam, FrozenGroupBitIdentical) {
  ParameterSet ps;
  Rng rng = make_rng(2);
  auto a = ps.add_gaussian("a", "train", {4, 4}, 1.0, rng);
  auto b = ps.add_gaussian("b", "frozen", {4, 4}, 1.0, rng);
  ps.set_frozen("frozen", true);
  const auto frozen = ps.checksum("frozen");
  const std::vector<double> bvals(b.values().begin(), b.values().end());
  AdamState st;
  for (int i = 0; i < 20; ++i) {
    backward(reduce_sum(mul(matmul(a, b), matmul(a, b))));
    optimizer_step(ps, st);
  }
  EXPECT_EQ(ps.checksum("frozen"), frozen);
  EXPECT_EQ(std::vector<double>(b.values().begin(), b.values().end()), bvals);
}

TEST(Adam, ZeroGradientLeavesValues) {
  ParameterSet ps;
  auto w = ps.add("w", "g", {1, 3}, {1.0, -2.0, 3.0});
  AdamState st;
  for (int i = 0; i < 5; ++i) optimizer_step(ps, st);
  EXPECT_EQ(std::vector<double>(w.values().begin(), w.values().end()), (std::vector<double>{1.0, -2.0, 3.0}));
  EXPECT_EQ(st.step, 5u);
}

TEST(Adam, MinimizesQuadratic) {
  ParameterSet ps;
  auto w = ps.add("w", "g", {1, 2}, {3.0, -4.0});
  AdamState st;
  st.lr = 0.05;
  for (int i = 0; i < 2000; ++i) {
    backward(reduce_sum(mul(w, w)));
    optimizer_step(ps, st);
  }
  EXPECT_LT(std::abs(w.values()[0]) + std::abs(w.values()[1]), 1e-2);
}

TEST(Checkpoint, RoundTrip) {
  ParameterSet ps;
  Rng rng = make_rng(3);
  ps.add_gaussian("enc.w", "encoder", {3, 5}, 1.0, rng);
  ps.add_gaussian("bb.w", "backbone", {2, 2}, 1.0, rng);
  ps.set_frozen("backbone", true);
  const auto ckpt = capture(ps, {{"seed", 3}});
  const auto bytes = encode_checkpoint(ckpt);
  EXPECT_EQ(bytes.substr(0, 4), "TETN");
  const auto back = decode_checkpoint(bytes);
  EXPECT_EQ(back.meta["seed"], 3);
  ASSERT_EQ(back.tensors.size(), 2u);
  EXPECT_EQ(back.tensors[0].name, "enc.w");
  EXPECT_EQ(back.tensors[1].group, "backbone");
  EXPECT_EQ(back.tensors[0].shape, (Shape{3, 5}));

  ParameterSet other;
  Rng rng2 = make_rng(99);
  other.add_gaussian("enc.w", "encoder", {3, 5}, 1.0, rng2);
  other.add_gaussian("bb.w", "backbone", {2, 2}, 1.0, rng2);
  apply_checkpoint(other, back);
  EXPECT_EQ(other.checksum(), ps.checksum());

  const auto dir = std::filesystem::temp_directory_path() / "telab_ckpt";
  std::filesystem::create_directories(dir);
  save_checkpoint(dir / "m.tetn", ckpt);
  EXPECT_EQ(encode_checkpoint(load_checkpoint(dir / "m.tetn")), bytes);
  std::filesystem::remove_all(dir);
}

TEST(Checkpoint, RejectsMalformedAndMismatched) {
  EXPECT_THROW(decode_checkpoint("nope"), ParseError);
  ParameterSet ps;
  ps.add_constant("w", "g", {2, 2}, 1.0);
  auto bytes = encode_checkpoint(capture(ps));
  EXPECT_THROW(decode_checkpoint(bytes.substr(0, bytes.size() - 3)), ParseError);
  bytes[0] = 'X';
  EXPECT_THROW(decode_checkpoint(bytes), ParseError);

  ParameterSet other;
  other.add_constant("w", "g", {2, 3}, 1.0);
  EXPECT_THROW(apply_checkpoint(other, capture(ps)), ShapeError);
  ParameterSet missing;
  missing.add_constant("v", "g", {2, 2}, 1.0);
  EXPECT_THROW(apply_checkpoint(missing, capture(ps)), ShapeError);
}

}  // namespace
}  // namespace telab::ad
