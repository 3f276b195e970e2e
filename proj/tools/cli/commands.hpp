#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "cli/experiment.hpp"

namespace telab::cli {

// Exit codes of run_command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitInvalidInput = 3;
inline constexpr int kExitTraining = 4;

// Environment variable that overrides the configured output directory
// (command-line flags still win).
inline constexpr const char* kOutputDirEnv = "TELAB_OUTPUT_DIR";

// Parses `args` (without the program name), resolves the experiment config
// (defaults < --config file < environment < flags) and runs the subcommand.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// The subcommands on a resolved config; they throw telab::Error subclasses.
void gen_data(const ExperimentConfig& cfg, std::ostream& out);
void solve(const ExperimentConfig& cfg, std::ostream& out);
void train_model(const ExperimentConfig& cfg, std::ostream& out);
void evaluate_policy(const ExperimentConfig& cfg, std::ostream& out);
void report(const ExperimentConfig& cfg, std::ostream& out);
void simulate_automaton(const ExperimentConfig& cfg, std::ostream& out);

}  // namespace telab::cli
