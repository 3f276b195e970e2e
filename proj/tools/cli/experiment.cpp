#include "cli/experiment.hpp"

#include <set>

#include "telab/common/error.hpp"
#include "telab/tm/series.hpp"

namespace telab::cli {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

// Reads members of one JSON object and rejects the ones nobody asked for.
class Section {
 public:
  Section(const json& doc, std::string where) : doc_(doc), where_(std::move(where)) {
    if (!doc_.is_object()) throw ValidationError(where_ + " must be a JSON object");
  }
  ~Section() noexcept(false) {
    if (std::uncaught_exceptions() > 0) return;
    for (const auto& [key, value] : doc_.items()) {
      if (!seen_.count(key)) throw ValidationError("unknown key '" + key + "' in " + where_);
    }
  }

  template <typename T>
  void read(const char* key, T& out) {
    seen_.insert(key);
    if (!doc_.contains(key)) return;
    try {
      out = doc_.at(key).get<T>();
    } catch (const json::exception& e) {
      throw ValidationError(where_ + "." + key + ": " + e.what());
    }
  }

  const json* child(const char* key) {
    seen_.insert(key);
    return doc_.contains(key) ? &doc_.at(key) : nullptr;
  }

  void ignore(const char* key) { seen_.insert(key); }

 private:
  const json& doc_;
  std::string where_;
  std::set<std::string> seen_;
};

ordered_json solver_json(const oracle::SolverSettings& s) {
  ordered_json j;
  j["step_size"] = s.step_size;
  j["step_rule"] = s.step_rule == oracle::StepRule::polyak ? "polyak" : "diminishing";
  j["level_patience"] = s.level_patience;
  j["halt_threshold"] = s.halt_threshold;
  j["max_steps"] = s.max_steps;
  j["patience"] = s.patience;
  j["averaging"] = s.averaging;
  return j;
}

void read_solver(const json& doc, oracle::SolverSettings& s) {
  Section r(doc, "solver");
  std::string rule = s.step_rule == oracle::StepRule::polyak ? "polyak" : "diminishing";
  r.read("step_size", s.step_size);
  r.read("step_rule", rule);
  r.read("level_patience", s.level_patience);
  r.read("halt_threshold", s.halt_threshold);
  r.read("max_steps", s.max_steps);
  r.read("patience", s.patience);
  r.read("averaging", s.averaging);
  if (rule == "polyak") {
    s.step_rule = oracle::StepRule::polyak;
  } else if (rule == "diminishing") {
    s.step_rule = oracle::StepRule::diminishing;
  } else {
    throw ValidationError("solver.step_rule must be 'polyak' or 'diminishing'");
  }
}

}  // namespace

void ExperimentConfig::validate() const {
  if (tunnels_k < 1) throw ValidationError("tunnels_k must be at least 1");
  if (window < 1) throw ValidationError("window must be at least 1");
  double total = 0.0;
  for (double r : split) {
    if (!(r >= 0.0)) throw ValidationError("split ratios must be nonnegative");
    total += r;
  }
  if (std::abs(total - 1.0) > 1e-9) throw ValidationError("split ratios must sum to 1");
  if (data.length < 1) throw ValidationError("data.length must be at least 1");
  if (!(data.total_volume >= 0.0)) throw ValidationError("data.total_volume must be nonnegative");
  solver.validate();
  resolved_model().validate();
  train.validate();
  resolved_scenario().validate();
  train::parse_policy(eval.policy);
  if (!(eval.wma_decay > 0.0 && eval.wma_decay <= 1.0)) throw ValidationError("eval.wma_decay must lie in (0, 1]");
  if (automaton.states < 1 || automaton.alphabet < 1) {
    throw ValidationError("automaton needs at least one state and one symbol");
  }
}

model::ModelConfig ExperimentConfig::resolved_model() const {
  model::ModelConfig m = model;
  m.encoder.window = window;
  return m;
}

train::Scenario ExperimentConfig::resolved_scenario() const {
  train::Scenario s;
  const std::string& k = scenario.kind;
  if (k == "normal") {
    s.kind = train::ScenarioKind::normal;
  } else if (k == "single-failure") {
    s.kind = train::ScenarioKind::single_failure;
  } else if (k == "multi-failure") {
    s.kind = train::ScenarioKind::multi_failure;
  } else if (k == "burst") {
    s.kind = train::ScenarioKind::burst;
  } else if (k == "drift") {
    s.kind = train::ScenarioKind::drift;
  } else {
    throw ValidationError("unknown scenario '" + k +
                          "' (normal, single-failure, multi-failure, burst, drift)");
  }
  s.failure_count = scenario.failure_count;
  s.burst_scale = scenario.burst_scale;
  s.segment = tm::parse_drift_segment(scenario.drift_segment);
  return s;
}

ordered_json to_json(const model::ModelConfig& m) {
  ordered_json j;
  j["encoder"] = {{"gnn_layers", m.encoder.gnn_layers},       {"gnn_dim", m.encoder.gnn_dim},
                  {"window", m.encoder.window},               {"history_embed", m.encoder.history_embed},
                  {"rnn_hidden", m.encoder.rnn_hidden},       {"rnn_dim", m.encoder.rnn_dim},
                  {"fused_dim", m.encoder.fused_dim},         {"tunnel_hidden", m.encoder.tunnel_hidden}};
  j["alignment"] = {{"heads", m.alignment.heads},
                    {"head_dim", m.alignment.head_dim},
                    {"prototypes", m.alignment.prototypes},
                    {"vocab_size", m.alignment.vocab_size}};
  j["backbone"] = {{"layers", m.backbone.layers},
                   {"model_dim", m.backbone.model_dim},
                   {"heads", m.backbone.heads},
                   {"mlp_hidden", m.backbone.mlp_hidden},
                   {"max_sequence", m.backbone.max_sequence},
                   {"causal", m.backbone.causal}};
  j["head"] = {{"hidden", m.head.hidden}, {"pe_dim", m.head.pe_dim}};
  j["max_prompt_tokens"] = m.max_prompt_tokens;
  return j;
}

model::ModelConfig model_config_from_json(const json& doc, model::ModelConfig m) {
  Section r(doc, "model");
  if (const auto* e = r.child("encoder")) {
    Section s(*e, "model.encoder");
    s.read("gnn_layers", m.encoder.gnn_layers);
    s.read("gnn_dim", m.encoder.gnn_dim);
    s.read("window", m.encoder.window);
    s.read("history_embed", m.encoder.history_embed);
    s.read("rnn_hidden", m.encoder.rnn_hidden);
    s.read("rnn_dim", m.encoder.rnn_dim);
    s.read("fused_dim", m.encoder.fused_dim);
    s.read("tunnel_hidden", m.encoder.tunnel_hidden);
  }
  if (const auto* a = r.child("alignment")) {
    Section s(*a, "model.alignment");
    s.read("heads", m.alignment.heads);
    s.read("head_dim", m.alignment.head_dim);
    s.read("prototypes", m.alignment.prototypes);
    s.read("vocab_size", m.alignment.vocab_size);
  }
  if (const auto* b = r.child("backbone")) {
    Section s(*b, "model.backbone");
    s.read("layers", m.backbone.layers);
    s.read("model_dim", m.backbone.model_dim);
    s.read("heads", m.backbone.heads);
    s.read("mlp_hidden", m.backbone.mlp_hidden);
    s.read("max_sequence", m.backbone.max_sequence);
    s.read("causal", m.backbone.causal);
  }
  if (const auto* h = r.child("head")) {
    Section s(*h, "model.head");
    s.read("hidden", m.head.hidden);
    s.read("pe_dim", m.head.pe_dim);
  }
  r.read("max_prompt_tokens", m.max_prompt_tokens);
  return m;
}

ordered_json to_json(const ExperimentConfig& c) {
  ordered_json j;
  j["seed"] = c.seed;
  j["paths"] = {{"topology", c.paths.topology},     {"series", c.paths.series},
                {"tm", c.paths.tm},                 {"checkpoint", c.paths.checkpoint},
                {"output_dir", c.paths.output_dir}, {"reports", c.paths.reports}};
  j["tunnels_k"] = c.tunnels_k;
  j["window"] = c.window;
  j["split"] = c.split;
  j["data"] = {{"length", c.data.length},
               {"total_volume", c.data.total_volume},
               {"trend_slope", c.data.trend_slope},
               {"season_amplitude", c.data.season_amplitude},
               {"season_period", c.data.season_period},
               {"noise_std", c.data.noise_std}};
  j["solver"] = solver_json(c.solver);
  auto model = to_json(c.model);
  model["encoder"].erase("window");
  j["model"] = model;
  j["train"] = {{"epochs", c.train.epochs},
                {"batch_size", c.train.batch_size},
                {"learning_rate", c.train.learning_rate},
                {"augmentation_probability", c.train.augmentation_probability},
                {"burst_scale", c.train.burst_scale},
                {"max_validation_samples", c.train.max_validation_samples}};
  j["scenario"] = {{"kind", c.scenario.kind},
                   {"failure_count", c.scenario.failure_count},
                   {"burst_scale", c.scenario.burst_scale},
                   {"drift_segment", c.scenario.drift_segment}};
  j["eval"] = {{"policy", c.eval.policy},
               {"critical_links", c.eval.critical_links},
               {"max_timesteps", c.eval.max_timesteps},
               {"wma_decay", c.eval.wma_decay},
               {"workers", c.eval.workers}};
  j["automaton"] = {{"states", c.automaton.states},
                    {"alphabet", c.automaton.alphabet},
                    {"length", c.automaton.length},
                    {"workers", c.automaton.workers}};
  return j;
}

ExperimentConfig config_from_json(const json& doc, ExperimentConfig c) {
  if (doc.is_object() && doc.contains("schema") && doc.contains("config")) {
    return config_from_json(doc.at("config"), std::move(c));
  }
  Section r(doc, "config");
  r.read("seed", c.seed);
  if (const auto* p = r.child("paths")) {
    Section s(*p, "paths");
    s.read("topology", c.paths.topology);
    s.read("series", c.paths.series);
    s.read("tm", c.paths.tm);
    s.read("checkpoint", c.paths.checkpoint);
    s.read("output_dir", c.paths.output_dir);
    s.read("reports", c.paths.reports);
  }
  r.read("tunnels_k", c.tunnels_k);
  r.read("window", c.window);
  r.read("split", c.split);
  if (const auto* d = r.child("data")) {
    Section s(*d, "data");
    s.read("length", c.data.length);
    s.read("total_volume", c.data.total_volume);
    s.read("trend_slope", c.data.trend_slope);
    s.read("season_amplitude", c.data.season_amplitude);
    s.read("season_period", c.data.season_period);
    s.read("noise_std", c.data.noise_std);
  }
  if (const auto* s = r.child("solver")) read_solver(*s, c.solver);
  if (const auto* m = r.child("model")) c.model = model_config_from_json(*m, c.model);
  if (const auto* t = r.child("train")) {
    Section s(*t, "train");
    s.read("epochs", c.train.epochs);
    s.read("batch_size", c.train.batch_size);
    s.read("learning_rate", c.train.learning_rate);
    s.read("augmentation_probability", c.train.augmentation_probability);
    s.read("burst_scale", c.train.burst_scale);
    s.read("max_validation_samples", c.train.max_validation_samples);
  }
  if (const auto* sc = r.child("scenario")) {
    Section s(*sc, "scenario");
    s.read("kind", c.scenario.kind);
    s.read("failure_count", c.scenario.failure_count);
    s.read("burst_scale", c.scenario.burst_scale);
    s.read("drift_segment", c.scenario.drift_segment);
  }
  if (const auto* e = r.child("eval")) {
    Section s(*e, "eval");
    s.read("policy", c.eval.policy);
    s.read("critical_links", c.eval.critical_links);
    s.read("max_timesteps", c.eval.max_timesteps);
    s.read("wma_decay", c.eval.wma_decay);
    s.read("workers", c.eval.workers);
  }
  if (const auto* a = r.child("automaton")) {
    Section s(*a, "automaton");
    s.read("states", c.automaton.states);
    s.read("alphabet", c.automaton.alphabet);
    s.read("length", c.automaton.length);
    s.read("workers", c.automaton.workers);
  }
  return c;
}

ordered_json protocol_json() {
  ordered_json j;
  j["burst_scales"] = tm::kBurstScales;
  j["drift_segments"] = {tm::to_string(tm::DriftSegment::first_quarter),
                         tm::to_string(tm::DriftSegment::second_quarter),
                         tm::to_string(tm::DriftSegment::third_quarter)};
  return j;
}

}  // namespace telab::cli
