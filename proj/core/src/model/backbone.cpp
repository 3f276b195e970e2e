#include "telab/model/backbone.hpp"

#include <cmath>

#include "telab/ad/ops.hpp"
#include "telab/common/error.hpp"

namespace telab::model {

using ad::Tensor;

void BackboneConfig::validate() const {
  if (model_dim == 0 || heads == 0 || mlp_hidden == 0 || max_sequence == 0) {
    throw ValidationError("backbone dimensions must be positive");
  }
  if (model_dim % heads != 0) throw ValidationError("backbone model_dim must be divisible by heads");
  if (model_dim % 2 != 0) throw ValidationError("backbone model_dim must be even");
}

BackboneParams init_backbone(ad::ParameterSet& params, const BackboneConfig& cfg, Rng& rng) {
  cfg.validate();
  params.set_frozen(kGroupBackbone, true);
  const std::size_t d = cfg.model_dim, h = cfg.mlp_hidden;
  BackboneParams p;
  for (std::size_t l = 0; l < cfg.layers; ++l) {
    const std::string pre = "backbone.layer" + std::to_string(l) + ".";
    auto g = [&](const std::string& name, std::size_t rows, std::size_t cols) {
      return params.add_gaussian(pre + name, kGroupBackbone, {rows, cols},
                                 1.0 / std::sqrt(static_cast<double>(rows)), rng);
    };
    auto c = [&](const std::string& name, std::size_t cols, double fill) {
      return params.add_constant(pre + name, kGroupBackbone, {1, cols}, fill);
    };
    BackboneParams::Layer layer;
    layer.ln1_gain = c("ln1_gain", d, 1.0);
    layer.ln1_bias = c("ln1_bias", d, 0.0);
    layer.wq = g("wq", d, d);
    layer.wk = g("wk", d, d);
    layer.wv = g("wv", d, d);
    layer.wo = g("wo", d, d);
    layer.ln2_gain = c("ln2_gain", d, 1.0);
    layer.ln2_bias = c("ln2_bias", d, 0.0);
    layer.w1 = g("w1", d, h);
    layer.b1 = c("b1", h, 0.0);
    layer.w2 = g("w2", h, d);
    layer.b2 = c("b2", d, 0.0);
    p.layers.push_back(std::move(layer));
  }
  return p;
}

namespace {

// Multi-head attention of `rows` queries at global positions offset.. over
// the first offset+rows keys (causal) or all keys.
Tensor attend(const Tensor& q, const Tensor& k, const Tensor& v, std::size_t offset, bool causal,
              std::size_t heads, std::vector<Tensor>* keep) {
  const std::size_t rows = q.rows(), keys = k.rows(), dh = q.cols() / heads;
  Tensor mask;
  if (causal) {
    std::vector<double> m(rows * keys, 0.0);
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = offset + r + 1; c < keys; ++c) m[r * keys + c] = -1e30;
    mask = Tensor::constant({rows, keys}, std::move(m));
  }
  const double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(dh));
  std::vector<Tensor> outs;
  for (std::size_t h = 0; h < heads; ++h) {
    const Tensor qh = slice(q, ad::Axis::cols, h * dh, (h + 1) * dh);
    const Tensor kh = slice(k, ad::Axis::cols, h * dh, (h + 1) * dh);
    const Tensor vh = slice(v, ad::Axis::cols, h * dh, (h + 1) * dh);
    Tensor scores = scale(matmul(qh, transpose(kh)), inv_sqrt);
    if (causal) scores = add(scores, mask);
    const Tensor w = row_softmax(scores);
    if (keep) keep->push_back(w);
    outs.push_back(matmul(w, vh));
  }
  return concat(outs, ad::Axis::cols);
}

}  // namespace

BackboneOutput backbone_forward(std::span<const std::size_t> prompt_tokens, const Tensor& aligned,
                                const Tensor& token_embedding, const BackboneParams& p,
                                const BackboneConfig& cfg, bool keep_attention) {
  const std::size_t d = cfg.model_dim;
  const std::size_t np = prompt_tokens.size();
  const std::size_t total = np + aligned.rows();
  if (aligned.cols() != d) throw ShapeError("aligned embeddings must have model_dim columns");
  if (token_embedding.cols() != d) throw ShapeError("token embedding width differs from model_dim");
  if (total > cfg.max_sequence) {
    throw ShapeError("sequence of " + std::to_string(total) + " exceeds backbone limit " +
                     std::to_string(cfg.max_sequence));
  }
  std::vector<double> pos(total * d);
  for (std::size_t t = 0; t < total; ++t) {
    const auto pe = ad::sinusoidal_pe(t, d);
    std::copy(pe.begin(), pe.end(), pos.begin() + static_cast<std::ptrdiff_t>(t * d));
  }
  const Tensor pos_all = Tensor::constant({total, d}, std::move(pos));

  BackboneOutput out;
  std::vector<Tensor>* keep = keep_attention ? &out.attention : nullptr;
  if (!cfg.causal) {
    // Bidirectional attention mixes prompt and aligned rows; run as one block.
    const Tensor parts[] = {embed_lookup(token_embedding, prompt_tokens), aligned};
    Tensor x = add(concat(parts, ad::Axis::rows), pos_all);
    for (const auto& L : p.layers) {
      const Tensor a = layer_norm(x, L.ln1_gain, L.ln1_bias);
      x = add(x, matmul(attend(matmul(a, L.wq), matmul(a, L.wk), matmul(a, L.wv), 0, false, cfg.heads, keep), L.wo));
      const Tensor b = layer_norm(x, L.ln2_gain, L.ln2_bias);
      x = add(x, linear(relu(linear(b, L.w1, L.b1)), L.w2, L.b2));
    }
    out.prompt_hidden = slice(x, ad::Axis::rows, 0, np).detach();
    out.hidden = slice(x, ad::Axis::rows, np, total);
    return out;
  }

  Tensor pre = add(embed_lookup(token_embedding, prompt_tokens), slice(pos_all, ad::Axis::rows, 0, np));
  Tensor suf = add(aligned, slice(pos_all, ad::Axis::rows, np, total));
  for (const auto& L : p.layers) {
    const Tensor a_pre = layer_norm(pre, L.ln1_gain, L.ln1_bias);
    const Tensor a_suf = layer_norm(suf, L.ln1_gain, L.ln1_bias);
    const Tensor k_pre = matmul(a_pre, L.wk), v_pre = matmul(a_pre, L.wv);
    const Tensor k_parts[] = {k_pre, matmul(a_suf, L.wk)};
    const Tensor v_parts[] = {v_pre, matmul(a_suf, L.wv)};
    const Tensor k_all = concat(k_parts, ad::Axis::rows);
    const Tensor v_all = concat(v_parts, ad::Axis::rows);
    std::vector<Tensor> pre_w, suf_w;
    const Tensor att_pre = attend(matmul(a_pre, L.wq), k_pre, v_pre, 0, true, cfg.heads, keep ? &pre_w : nullptr);
    const Tensor att_suf = attend(matmul(a_suf, L.wq), k_all, v_all, np, true, cfg.heads, keep ? &suf_w : nullptr);
    if (keep) {
      // Reassemble full-sequence weights: prompt rows padded with masked zeros.
      for (std::size_t h = 0; h < cfg.heads; ++h) {
        const Tensor padded[] = {pre_w[h], Tensor::constant({np, total - np}, 0.0)};
        const Tensor rows[] = {concat(padded, ad::Axis::cols), suf_w[h]};
        keep->push_back(concat(rows, ad::Axis::rows));
      }
    }
    pre = add(pre, matmul(att_pre, L.wo));
    suf = add(suf, matmul(att_suf, L.wo));
    const Tensor b_pre = layer_norm(pre, L.ln2_gain, L.ln2_bias);
    const Tensor b_suf = layer_norm(suf, L.ln2_gain, L.ln2_bias);
    pre = add(pre, linear(relu(linear(b_pre, L.w1, L.b1)), L.w2, L.b2));
    suf = add(suf, linear(relu(linear(b_suf, L.w1, L.b1)), L.w2, L.b2));
  }
  out.prompt_hidden = pre.detach();
  out.hidden = suf;
  return out;
}

}  // namespace telab::model
