#pragma once

#include <vector>

#include "telab/ad/parameters.hpp"
#include "telab/model/config.hpp"

namespace telab::model {

// The text prototypes: a frozen vocab x d_lm input embedding matrix (shared
// with the backbone's token lookup) and a trainable N' x vocab projection
// that condenses it into R^N.
struct PrototypeBank {
  ad::Tensor embedding;
  ad::Tensor projection;

  ad::Tensor projected() const;
};

// Seeded Gaussian embedding matrix in the frozen prototype group.
PrototypeBank init_prototype_bank(ad::ParameterSet& params, const AlignmentConfig& cfg,
                                  std::size_t model_dim, Rng& rng);

struct AlignmentParams {
  // Heads packed along columns: head k uses columns [k d_k, (k+1) d_k).
  ad::Tensor wq;  // C x heads*d_k
  ad::Tensor wk;  // d_lm x heads*d_k
  ad::Tensor wv;  // d_lm x heads*d_k
  ad::Tensor wo;  // heads*d_k x d_lm
  ad::Tensor bo;  // 1 x d_lm
};

AlignmentParams init_alignment(ad::ParameterSet& params, const AlignmentConfig& cfg,
                               std::size_t fused_dim, std::size_t model_dim, Rng& rng);

struct AlignmentOutput {
  ad::Tensor aligned;                  // S x d_lm
  std::vector<ad::Tensor> attention;   // per head, S x N'
};

// softmax((R^F Wq_k)(R^N Wk_k)^T / sqrt(d_k)) (R^N Wv_k) per head, heads
// concatenated and mapped to d_lm.
AlignmentOutput align_cross_attention(const ad::Tensor& fused, const PrototypeBank& bank,
                                      const AlignmentParams& p, const AlignmentConfig& cfg);

}  // namespace telab::model
