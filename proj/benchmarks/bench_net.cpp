#include <benchmark/benchmark.h>

#include "bench_common.hpp"
#include "telab/net/failures.hpp"
#include "telab/net/mlu.hpp"

namespace {

using namespace telab;

void BM_SelectTunnelsAbilene(benchmark::State& state) {
  const auto topo = bench::abilene();
  for (auto _ : state) benchmark::DoNotOptimize(net::select_tunnels(topo, state.range(0)));
}
BENCHMARK(BM_SelectTunnelsAbilene)->Arg(1)->Arg(4)->Arg(8);

void BM_SelectTunnelsRing(benchmark::State& state) {
  const auto topo = bench::ring(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(net::select_tunnels(topo, 4));
}
BENCHMARK(BM_SelectTunnelsRing)->Arg(12)->Arg(24)->Arg(48);

void BM_EvaluateMlu(benchmark::State& state) {
  const auto topo = bench::ring(state.range(0));
  const auto tunnels = net::select_tunnels(topo, 4);
  const auto tm = bench::gravity(topo, 1)[0];
  const auto cfg = net::uniform_config(tunnels);
  for (auto _ : state) benchmark::DoNotOptimize(net::evaluate_mlu(topo, tunnels, tm, cfg));
}
BENCHMARK(BM_EvaluateMlu)->Arg(12)->Arg(24)->Arg(48);

void BM_ApplyFailures(benchmark::State& state) {
  const auto topo = bench::abilene();
  const auto tunnels = net::select_tunnels(topo, 4);
  const auto cfg = net::uniform_config(tunnels);
  const std::set<net::EdgeIndex> failed{0, 1};
  for (auto _ : state) benchmark::DoNotOptimize(net::apply_failures(topo, tunnels, cfg, failed));
}
BENCHMARK(BM_ApplyFailures);

void BM_GravitySeries(benchmark::State& state) {
  const auto topo = bench::abilene();
  for (auto _ : state) benchmark::DoNotOptimize(bench::gravity(topo, state.range(0)));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GravitySeries)->Arg(100)->Arg(1000);

}  // namespace
