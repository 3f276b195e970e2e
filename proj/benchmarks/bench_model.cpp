#include <benchmark/benchmark.h>

#include "bench_common.hpp"
#include "telab/ad/ops.hpp"
#include "telab/model/lmte.hpp"
#include "telab/train/loss.hpp"

namespace {

using namespace telab;

struct Bench {
  net::Topology topo;
  net::TunnelSet tunnels;
  tm::TrafficSeries series;
  model::LmteModel model;

  explicit Bench(std::size_t nodes)
      : topo(bench::ring(nodes)),
        tunnels(net::select_tunnels(topo, 4)),
        series(bench::gravity(topo, 13)),
        model(topo, tunnels, model::ModelConfig{}, 1) {}

  std::span<const net::TrafficMatrix> history() const { return {series.matrices.data(), 12}; }
};

void BM_ModelInfer(benchmark::State& state) {
  const Bench b(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(b.model.infer(b.history()));
}
BENCHMARK(BM_ModelInfer)->Arg(12)->Arg(24)->Unit(benchmark::kMillisecond);

void BM_ModelTrainStep(benchmark::State& state) {
  Bench b(state.range(0));
  const auto layout = train::make_loss_layout(b.topo, b.tunnels);
  for (auto _ : state) {
    const auto pass = b.model.forward(b.history(), {});
    auto loss = train::mlu_loss(layout, b.tunnels, b.series[12], pass.ratios);
    ad::backward(loss);
    b.model.params().zero_grad();
  }
}
BENCHMARK(BM_ModelTrainStep)->Arg(12)->Arg(24)->Unit(benchmark::kMillisecond);

void BM_Matmul(benchmark::State& state) {
  const std::size_t n = state.range(0);
  const auto a = ad::Tensor::constant({n, n}, 0.5), b = ad::Tensor::constant({n, n}, 0.25);
  for (auto _ : state) benchmark::DoNotOptimize(ad::matmul(a, b));
  state.SetItemsProcessed(state.iterations() * n * n * n);
}
BENCHMARK(BM_Matmul)->Arg(16)->Arg(64)->Arg(128);

}  // namespace
