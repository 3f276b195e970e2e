#pragma once

#include <span>
#include <vector>

#include "telab/ad/parameters.hpp"
#include "telab/model/config.hpp"

namespace telab::model {

struct BackboneParams {
  struct Layer {
    ad::Tensor ln1_gain, ln1_bias;
    ad::Tensor wq, wk, wv, wo;
    ad::Tensor ln2_gain, ln2_bias;
    ad::Tensor w1, b1, w2, b2;
  };
  std::vector<Layer> layers;
};

// Seeded random decoder stack in the frozen backbone group.
BackboneParams init_backbone(ad::ParameterSet& params, const BackboneConfig& cfg, Rng& rng);

struct BackboneOutput {
  // Hidden states of the prompt positions. They depend only on frozen
  // weights and token ids, so they never carry gradient.
  ad::Tensor prompt_hidden;
  // Hidden states of the appended aligned embeddings.
  ad::Tensor hidden;
  // Self-attention weights per layer and head over the full sequence
  // (prompt rows first), collected only when requested.
  std::vector<ad::Tensor> attention;
};

// Sequence = [token embeddings of the prompt; aligned] plus sinusoidal
// positions, then `layers` pre-norm blocks x += attn(LN(x)); x += mlp(LN(x)).
// With causal masking a position only attends to itself and earlier ones,
// so the prompt rows are evaluated on their own as constants. Throws
// ShapeError when the sequence exceeds cfg.max_sequence.
BackboneOutput backbone_forward(std::span<const std::size_t> prompt_tokens, const ad::Tensor& aligned,
                                const ad::Tensor& token_embedding, const BackboneParams& p,
                                const BackboneConfig& cfg, bool keep_attention = false);

}  // namespace telab::model
