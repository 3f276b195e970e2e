#include "telab/model/lmte.hpp"

#include "telab/common/error.hpp"

namespace telab::model {

void ModelConfig::validate() const {
  encoder.validate();
  alignment.validate();
  backbone.validate();
  head.validate();
  if (max_prompt_tokens == 0) throw ValidationError("max_prompt_tokens must be positive");
  if (max_prompt_tokens + encoder.window > backbone.max_sequence) {
    throw ValidationError("prompt budget plus window exceeds the backbone sequence limit");
  }
}

LmteModel::LmteModel(net::Topology topo, net::TunnelSet tunnels, ModelConfig cfg, std::uint64_t seed)
    : topo_(std::move(topo)),
      tunnels_(std::move(tunnels)),
      cfg_(cfg),
      tokenizer_(cfg.alignment.vocab_size) {
  cfg_.validate();
  if (topo_.node_count() < 2) throw ValidationError("model needs at least two nodes");
  if (tunnels_.pairs.empty()) throw ValidationError("model needs at least one routable pair");
  ctx_ = make_topology_context(topo_, tunnels_);
  layout_ = make_head_layout(topo_, tunnels_, ctx_.order);
  // Separate streams so changing one component's size leaves the others'
  // initial values untouched.
  Rng bank_rng = make_rng(derive_seed(seed, "model.prototypes"));
  Rng backbone_rng = make_rng(derive_seed(seed, "model.backbone"));
  Rng encoder_rng = make_rng(derive_seed(seed, "model.encoder"));
  Rng align_rng = make_rng(derive_seed(seed, "model.alignment"));
  Rng head_rng = make_rng(derive_seed(seed, "model.head"));
  bank_ = init_prototype_bank(params_, cfg_.alignment, cfg_.backbone.model_dim, bank_rng);
  backbone_ = init_backbone(params_, cfg_.backbone, backbone_rng);
  encoder_ = init_encoder(params_, cfg_.encoder, topo_.node_count(), ctx_.max_hops, encoder_rng);
  alignment_ = init_alignment(params_, cfg_.alignment, cfg_.encoder.fused_dim, cfg_.backbone.model_dim, align_rng);
  head_ = init_head(params_, cfg_.head, cfg_.backbone.model_dim, topo_.node_count(), tunnels_.k, head_rng);
}

Prompt LmteModel::prompt(std::span<const net::TrafficMatrix> history, const Constraints& constraints) const {
  return build_prompt(topo_, tunnels_, history, constraints, tokenizer_, cfg_.max_prompt_tokens);
}

ForwardPass LmteModel::forward(std::span<const net::TrafficMatrix> history, const Constraints& constraints,
                               bool keep_attention) const {
  ForwardPass f;
  f.topology = encode_topology(ctx_, encoder_);
  f.temporal = encode_history(ctx_, history, encoder_, cfg_.encoder);
  f.fused = fuse_reproject(f.temporal, f.topology.tunnel_embeddings, encoder_, cfg_.encoder);
  f.alignment = align_cross_attention(f.fused, bank_, alignment_, cfg_.alignment);
  f.prompt = prompt(history, constraints);
  f.backbone = backbone_forward(f.prompt.tokens, f.alignment.aligned, bank_.embedding, backbone_,
                                cfg_.backbone, keep_attention);
  f.ratios = head_forward(f.backbone.hidden, layout_, head_, cfg_.head);
  return f;
}

net::TeConfig LmteModel::infer(std::span<const net::TrafficMatrix> history,
                               const Constraints& constraints) const {
  ad::NoGradGuard guard;
  return to_config(forward(history, constraints).ratios, tunnels_);
}

}  // namespace telab::model
