#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "telab/model/config.hpp"
#include "telab/oracle/automaton.hpp"
#include "telab/train/evaluate.hpp"
#include "telab/train/trainer.hpp"

namespace telab::cli {

struct Paths {
  std::string topology;
  std::string series;
  std::string tm;
  std::string checkpoint;
  std::string output_dir = "telab-out";
  std::vector<std::string> reports;
};

struct DataSettings {
  std::size_t length = 1000;
  // 0 selects a quarter of the summed link capacity.
  double total_volume = 0.0;
  double trend_slope = 0.0;
  double season_amplitude = 0.2;
  std::size_t season_period = 24;
  double noise_std = 0.08;
};

struct ScenarioSettings {
  std::string kind = "normal";
  std::size_t failure_count = 2;
  double burst_scale = 10.0;
  std::string drift_segment = "0-25";
};

struct EvalSettings {
  std::string policy = "model";
  std::size_t critical_links = 18;
  std::size_t max_timesteps = 0;
  double wma_decay = 0.5;
  std::size_t workers = 1;
};

struct AutomatonSettings {
  std::size_t states = 16;
  std::size_t alphabet = 4;
  std::size_t length = 256;
  std::size_t workers = 1;
};

// Every knob of a run. JSON keys mirror the field names; missing keys keep
// their defaults and unknown keys are rejected.
struct ExperimentConfig {
  std::uint64_t seed = 0;
  Paths paths;
  std::size_t tunnels_k = 4;
  std::size_t window = 12;
  std::array<double, 3> split{0.7, 0.1, 0.2};
  DataSettings data;
  oracle::SolverSettings solver;
  model::ModelConfig model;
  train::TrainSettings train;
  ScenarioSettings scenario;
  EvalSettings eval;
  AutomatonSettings automaton;

  // Value checks only; path existence is checked by the command that
  // reads the path.
  void validate() const;

  // Model config with the encoder window set to `window`.
  model::ModelConfig resolved_model() const;
  train::Scenario resolved_scenario() const;
};

nlohmann::ordered_json to_json(const ExperimentConfig& cfg);
// Applies the keys present in `doc` on top of `base`. A provenance document
// is accepted too; its "config" member is used.
ExperimentConfig config_from_json(const nlohmann::json& doc, ExperimentConfig base = {});

nlohmann::ordered_json to_json(const model::ModelConfig& cfg);
model::ModelConfig model_config_from_json(const nlohmann::json& doc, model::ModelConfig base = {});

// Fixed evaluation protocol constants echoed into provenance.
nlohmann::ordered_json protocol_json();

}  // namespace telab::cli
