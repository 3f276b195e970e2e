#pragma once

#include <cstdint>
#include <span>

#include "telab/ad/parameters.hpp"
#include "telab/model/alignment.hpp"
#include "telab/model/backbone.hpp"
#include "telab/model/encoders.hpp"
#include "telab/model/head.hpp"
#include "telab/model/prompt.hpp"

namespace telab::model {

struct ForwardPass {
  Prompt prompt;
  TopologyEncoding topology;
  ad::Tensor temporal;  // R^D
  ad::Tensor fused;     // R^F
  AlignmentOutput alignment;
  BackboneOutput backbone;
  // pairs x width split ratios before any failure masking.
  ad::Tensor ratios;
};

// The full pipeline bound to one topology and tunnel set. Parameters are
// created from `seed`; the backbone and prototype embedding are frozen.
class LmteModel {
 public:
  LmteModel(net::Topology topo, net::TunnelSet tunnels, ModelConfig cfg, std::uint64_t seed);
  LmteModel(const LmteModel&) = delete;
  LmteModel& operator=(const LmteModel&) = delete;
  LmteModel(LmteModel&&) = default;
  LmteModel& operator=(LmteModel&&) = default;

  // encode_topology -> encode_history -> fuse_reproject ->
  // align_cross_attention -> build_prompt -> backbone_forward -> head_forward.
  ForwardPass forward(std::span<const net::TrafficMatrix> history, const Constraints& constraints,
                      bool keep_attention = false) const;

  // Forward without graph recording, returned as a configuration over the
  // full tunnel set.
  net::TeConfig infer(std::span<const net::TrafficMatrix> history,
                      const Constraints& constraints = {}) const;

  Prompt prompt(std::span<const net::TrafficMatrix> history, const Constraints& constraints) const;

  const net::Topology& topology() const { return topo_; }
  const net::TunnelSet& tunnels() const { return tunnels_; }
  const ModelConfig& config() const { return cfg_; }
  const TopologyContext& context() const { return ctx_; }
  const HeadLayout& head_layout() const { return layout_; }
  ad::ParameterSet& params() { return params_; }
  const ad::ParameterSet& params() const { return params_; }
  const PrototypeBank& bank() const { return bank_; }
  const EncoderParams& encoder_params() const { return encoder_; }
  const AlignmentParams& alignment_params() const { return alignment_; }
  const BackboneParams& backbone_params() const { return backbone_; }
  const HeadParams& head_params() const { return head_; }
  const Tokenizer& tokenizer() const { return tokenizer_; }

 private:
  net::Topology topo_;
  net::TunnelSet tunnels_;
  ModelConfig cfg_;
  TopologyContext ctx_;
  HeadLayout layout_;
  Tokenizer tokenizer_;
  ad::ParameterSet params_;
  PrototypeBank bank_;
  EncoderParams encoder_;
  AlignmentParams alignment_;
  BackboneParams backbone_;
  HeadParams head_;
};

}  // namespace telab::model
