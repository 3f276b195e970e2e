#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace telab::oracle {

using State = std::uint32_t;
using Symbol = std::uint32_t;

// Deterministic automaton with an explicit Q -> Q table per input symbol.
class FiniteAutomaton {
 public:
  // tables[sigma][q] = delta(q, sigma); every entry must be < state_count.
  FiniteAutomaton(std::size_t state_count, std::vector<std::vector<State>> tables);

  std::size_t state_count() const { return states_; }
  std::size_t alphabet_size() const { return tables_.size(); }
  State next(State q, Symbol sigma) const { return tables_[sigma][q]; }
  std::span<const State> table(Symbol sigma) const { return tables_.at(sigma); }

 private:
  std::size_t states_;
  std::vector<std::vector<State>> tables_;
};

// q_t = delta(q_{t-1}, sigma_t) for t = 1..T, applied one step at a time.
std::vector<State> sequential_simulate(const FiniteAutomaton& a, std::span<const Symbol> word,
                                       State q0);

struct ParallelRun {
  // q_1 .. q_T
  std::vector<State> trajectory;
  // Composition levels executed; ceil(log2 T).
  std::size_t levels = 0;
};

// Computes every prefix composition delta_{sigma_t} o ... o delta_{sigma_1}
// as a function table with a log-depth scan (level d composes each prefix
// with the one 2^d positions earlier), then reads off q_t by applying the
// t-th prefix function to q0. Positions within a level are independent
// and may be evaluated by up to `workers` threads.
ParallelRun parallel_simulate(const FiniteAutomaton& a, std::span<const Symbol> word, State q0,
                              std::size_t workers = 1);

}  // namespace telab::oracle
