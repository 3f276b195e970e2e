#include "telab/model/alignment.hpp"

#include <cmath>

#include "telab/ad/ops.hpp"
#include "telab/common/error.hpp"

namespace telab::model {

using ad::Tensor;

void AlignmentConfig::validate() const {
  if (heads == 0 || head_dim == 0 || prototypes == 0) throw ValidationError("alignment dimensions must be positive");
  if (vocab_size < 2) throw ValidationError("vocabulary needs at least two ids");
}

Tensor PrototypeBank::projected() const { return matmul(projection, embedding); }

PrototypeBank init_prototype_bank(ad::ParameterSet& params, const AlignmentConfig& cfg,
                                  std::size_t model_dim, Rng& rng) {
  cfg.validate();
  PrototypeBank bank;
  params.set_frozen(kGroupPrototypes, true);
  bank.embedding = params.add_gaussian("prototypes.embedding", kGroupPrototypes,
                                       {cfg.vocab_size, model_dim}, 1.0, rng);
  bank.projection = params.add_gaussian("alignment.projection", kGroupAlignment,
                                        {cfg.prototypes, cfg.vocab_size},
                                        1.0 / std::sqrt(static_cast<double>(cfg.vocab_size)), rng);
  return bank;
}

AlignmentParams init_alignment(ad::ParameterSet& params, const AlignmentConfig& cfg,
                               std::size_t fused_dim, std::size_t model_dim, Rng& rng) {
  cfg.validate();
  const std::size_t width = cfg.heads * cfg.head_dim;
  auto g = [&](const char* name, std::size_t rows, std::size_t cols) {
    return params.add_gaussian(name, kGroupAlignment, {rows, cols},
                               1.0 / std::sqrt(static_cast<double>(rows)), rng);
  };
  AlignmentParams p;
  p.wq = g("alignment.wq", fused_dim, width);
  p.wk = g("alignment.wk", model_dim, width);
  p.wv = g("alignment.wv", model_dim, width);
  p.wo = g("alignment.wo", width, model_dim);
  p.bo = params.add_constant("alignment.bo", kGroupAlignment, {1, model_dim}, 0.0);
  return p;
}

AlignmentOutput align_cross_attention(const Tensor& fused, const PrototypeBank& bank,
                                      const AlignmentParams& p, const AlignmentConfig& cfg) {
  if (fused.cols() != p.wq.rows()) throw ShapeError("fused width does not match alignment parameters");
  const Tensor protos = bank.projected();
  const Tensor q = matmul(fused, p.wq);
  const Tensor k = matmul(protos, p.wk);
  const Tensor v = matmul(protos, p.wv);
  const double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(cfg.head_dim));
  AlignmentOutput out;
  std::vector<Tensor> heads;
  for (std::size_t h = 0; h < cfg.heads; ++h) {
    const std::size_t b = h * cfg.head_dim, e = b + cfg.head_dim;
    const Tensor qh = slice(q, ad::Axis::cols, b, e);
    const Tensor kh = slice(k, ad::Axis::cols, b, e);
    const Tensor vh = slice(v, ad::Axis::cols, b, e);
    const Tensor weights = row_softmax(scale(matmul(qh, transpose(kh)), inv_sqrt));
    out.attention.push_back(weights);
    heads.push_back(matmul(weights, vh));
  }
  out.aligned = linear(concat(heads, ad::Axis::cols), p.wo, p.bo);
  return out;
}

}  // namespace telab::model
