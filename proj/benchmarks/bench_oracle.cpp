#include <benchmark/benchmark.h>

#include "bench_common.hpp"
#include "telab/oracle/finite_automaton.hpp"
#include "telab/oracle/simplex.hpp"
#include "telab/oracle/solver.hpp"

namespace {

using namespace telab;

void BM_ProjectSimplex(benchmark::State& state) {
  Rng rng = make_rng(1);
  std::normal_distribution<double> n;
  std::vector<double> v(state.range(0));
  for (auto& x : v) x = n(rng);
  for (auto _ : state) benchmark::DoNotOptimize(oracle::project_simplex(v));
}
BENCHMARK(BM_ProjectSimplex)->Arg(4)->Arg(64)->Arg(1024);

void BM_SolveTe(benchmark::State& state) {
  const auto topo = bench::ring(state.range(0));
  const auto tunnels = net::select_tunnels(topo, 4);
  const auto tm = bench::gravity(topo, 1)[0];
  std::size_t steps = 0;
  for (auto _ : state) {
    const auto r = oracle::solve_te(topo, tunnels, tm, {});
    steps = r.steps;
    benchmark::DoNotOptimize(r.mlu);
  }
  state.counters["transitions"] = static_cast<double>(steps);
}
BENCHMARK(BM_SolveTe)->Arg(12)->Arg(24)->Unit(benchmark::kMillisecond);

struct AutomatonInput {
  oracle::FiniteAutomaton automaton;
  std::vector<oracle::Symbol> word;
};

AutomatonInput random_automaton(std::size_t states, std::size_t length) {
  Rng rng = make_rng(states * 7919 + length);
  std::uniform_int_distribution<oracle::State> s(0, static_cast<oracle::State>(states - 1));
  std::vector<std::vector<oracle::State>> tables(4, std::vector<oracle::State>(states));
  for (auto& t : tables)
    for (auto& q : t) q = s(rng);
  std::vector<oracle::Symbol> word(length);
  std::uniform_int_distribution<oracle::Symbol> sym(0, 3);
  for (auto& w : word) w = sym(rng);
  return {oracle::FiniteAutomaton(states, std::move(tables)), std::move(word)};
}

void BM_SequentialAutomaton(benchmark::State& state) {
  const auto in = random_automaton(64, state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(oracle::sequential_simulate(in.automaton, in.word, 0));
}
BENCHMARK(BM_SequentialAutomaton)->Arg(256)->Arg(4096);

void BM_ParallelAutomaton(benchmark::State& state) {
  const auto in = random_automaton(64, state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(oracle::parallel_simulate(in.automaton, in.word, 0, state.range(1)));
}
BENCHMARK(BM_ParallelAutomaton)->Args({256, 1})->Args({4096, 1})->Args({4096, 4});

}  // namespace
