#include "telab/oracle/finite_automaton.hpp"

#include <string>

#include "telab/common/error.hpp"
#include "telab/common/parallel.hpp"

namespace telab::oracle {

FiniteAutomaton::FiniteAutomaton(std::size_t state_count, std::vector<std::vector<State>> tables)
    : states_(state_count), tables_(std::move(tables)) {
  if (states_ == 0) throw ValidationError("automaton needs at least one state");
  for (std::size_t s = 0; s < tables_.size(); ++s) {
    if (tables_[s].size() != states_) {
      throw ValidationError("transition table " + std::to_string(s) + " has wrong size");
    }
    for (State q : tables_[s]) {
      if (q >= states_) throw ValidationError("transition table entry out of range");
    }
  }
}

namespace {
void check_word(const FiniteAutomaton& a, std::span<const Symbol> word, State q0) {
  if (q0 >= a.state_count()) throw ValidationError("initial state out of range");
  for (Symbol s : word) {
    if (s >= a.alphabet_size()) throw ValidationError("input symbol out of range");
  }
}
}  // namespace

std::vector<State> sequential_simulate(const FiniteAutomaton& a, std::span<const Symbol> word,
                                       State q0) {
  check_word(a, word, q0);
  std::vector<State> out;
  out.reserve(word.size());
  State q = q0;
  for (Symbol s : word) {
    q = a.next(q, s);
    out.push_back(q);
  }
  return out;
}

ParallelRun parallel_simulate(const FiniteAutomaton& a, std::span<const Symbol> word, State q0,
                              std::size_t workers) {
  check_word(a, word, q0);
  const std::size_t T = word.size();
  const std::size_t Q = a.state_count();
  ParallelRun run;
  if (T == 0) return run;

  // prefix[t * Q + q]: state reached from q after symbols 1..t+1 covered so far
  std::vector<State> prefix(T * Q);
  for (std::size_t t = 0; t < T; ++t) {
    const auto table = a.table(word[t]);
    std::copy(table.begin(), table.end(), prefix.begin() + static_cast<std::ptrdiff_t>(t * Q));
  }
  std::vector<State> next(T * Q);
  for (std::size_t offset = 1; offset < T; offset <<= 1) {
    parallel_for(
        T,
        [&](std::size_t t) {
          State* dst = next.data() + t * Q;
          const State* own = prefix.data() + t * Q;
          if (t < offset) {
            std::copy(own, own + Q, dst);
            return;
          }
          const State* earlier = prefix.data() + (t - offset) * Q;
          for (std::size_t q = 0; q < Q; ++q) dst[q] = own[earlier[q]];
        },
        workers);
    prefix.swap(next);
    ++run.levels;
  }
  run.trajectory.resize(T);
  for (std::size_t t = 0; t < T; ++t) run.trajectory[t] = prefix[t * Q + q0];
  return run;
}

}  // namespace telab::oracle
