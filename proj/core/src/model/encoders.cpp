#include "telab/model/encoders.hpp"

#include <algorithm>
#include <cmath>

#include "telab/ad/ops.hpp"
#include "telab/common/error.hpp"

namespace telab::model {

using ad::Shape;
using ad::Tensor;

void EncoderConfig::validate() const {
  if (gnn_layers == 0 || gnn_dim == 0 || window == 0 || history_embed == 0 || rnn_hidden == 0 ||
      rnn_dim == 0 || fused_dim == 0 || tunnel_hidden == 0) {
    throw ValidationError("encoder dimensions must be positive");
  }
}

TopologyContext make_topology_context(const net::Topology& topo, const net::TunnelSet& tunnels) {
  if (tunnels.node_count != topo.node_count()) throw ShapeError("tunnel set built for another topology");
  TopologyContext ctx;
  const std::size_t n = topo.node_count();
  const std::size_t m = topo.edge_count();
  ctx.node_count = n;
  ctx.edge_count = m;
  ctx.order = canonical_order(topo);
  double cap_sum = 0.0;
  for (const auto& e : topo.edges()) cap_sum += e.capacity;
  ctx.capacity_scale = m > 0 ? cap_sum / static_cast<double>(m) : 1.0;

  std::vector<double> feats(n * 4, 0.0), in_mean(n * n, 0.0), out_mean(n * n, 0.0);
  for (std::size_t v = 0; v < n; ++v) {
    const auto node = static_cast<net::NodeIndex>(v);
    const auto ins = topo.in_edges(node);
    const auto outs = topo.out_edges(node);
    double incident = 0.0;
    for (auto e : ins) {
      incident += topo.edge(e).capacity;
      in_mean[v * n + topo.edge(e).tail] += 1.0 / static_cast<double>(ins.size());
    }
    for (auto e : outs) {
      incident += topo.edge(e).capacity;
      out_mean[v * n + topo.edge(e).head] += 1.0 / static_cast<double>(outs.size());
    }
    feats[v * 4 + 0] = static_cast<double>(ins.size());
    feats[v * 4 + 1] = static_cast<double>(outs.size());
    feats[v * 4 + 2] = incident / ctx.capacity_scale;
    feats[v * 4 + 3] = 1.0;
  }
  ctx.initial_features = Tensor::constant({n, 4}, std::move(feats));
  ctx.in_mean = Tensor::constant({n, n}, std::move(in_mean));
  ctx.out_mean = Tensor::constant({n, n}, std::move(out_mean));

  std::vector<double> caps(m);
  for (std::size_t e = 0; e < m; ++e) {
    ctx.tails.push_back(topo.edge(static_cast<net::EdgeIndex>(e)).tail);
    ctx.heads.push_back(topo.edge(static_cast<net::EdgeIndex>(e)).head);
    caps[e] = topo.edge(static_cast<net::EdgeIndex>(e)).capacity / ctx.capacity_scale;
  }
  ctx.capacities = Tensor::constant({m, 1}, std::move(caps));

  ctx.max_hops = tunnels.max_hops();
  ctx.tunnel_count = tunnels.tunnel_count();
  ctx.hop_edges.assign(ctx.max_hops, std::vector<std::size_t>(ctx.tunnel_count, m));
  std::size_t p = 0;
  for (const auto& pair : tunnels.pairs) {
    for (const auto& t : pair.tunnels) {
      for (std::size_t h = 0; h < t.edges.size(); ++h) ctx.hop_edges[h][p] = t.edges[h];
      ++p;
    }
  }
  return ctx;
}

std::size_t tunnel_feature_len(const EncoderConfig& cfg, std::size_t max_hops) {
  return max_hops * (2 * cfg.gnn_dim + 1);
}

namespace {

Tensor glorot(ad::ParameterSet& ps, const std::string& name, Shape shape, Rng& rng) {
  return ps.add_gaussian(name, kGroupEncoder, shape, 1.0 / std::sqrt(static_cast<double>(shape.rows)), rng);
}

Tensor zeros(ad::ParameterSet& ps, const std::string& name, std::size_t cols) {
  return ps.add_constant(name, kGroupEncoder, {1, cols}, 0.0);
}

}  // namespace

EncoderParams init_encoder(ad::ParameterSet& ps, const EncoderConfig& cfg, std::size_t node_count,
                           std::size_t max_hops, Rng& rng) {
  cfg.validate();
  EncoderParams p;
  std::size_t in_dim = 4;
  for (std::size_t l = 0; l < cfg.gnn_layers; ++l) {
    const std::string prefix = "encoder.gnn" + std::to_string(l) + ".";
    p.gnn.push_back({glorot(ps, prefix + "self", {in_dim, cfg.gnn_dim}, rng),
                     glorot(ps, prefix + "in", {in_dim, cfg.gnn_dim}, rng),
                     glorot(ps, prefix + "out", {in_dim, cfg.gnn_dim}, rng),
                     zeros(ps, prefix + "bias", cfg.gnn_dim)});
    in_dim = cfg.gnn_dim;
  }
  const std::size_t flat = node_count * (node_count - 1);
  p.hist_w = glorot(ps, "encoder.history.w", {flat, cfg.history_embed}, rng);
  p.hist_b = zeros(ps, "encoder.history.b", cfg.history_embed);
  p.fwd_x = glorot(ps, "encoder.rnn.fwd_x", {cfg.history_embed, cfg.rnn_hidden}, rng);
  p.fwd_h = glorot(ps, "encoder.rnn.fwd_h", {cfg.rnn_hidden, cfg.rnn_hidden}, rng);
  p.fwd_b = zeros(ps, "encoder.rnn.fwd_b", cfg.rnn_hidden);
  p.bwd_x = glorot(ps, "encoder.rnn.bwd_x", {cfg.history_embed, cfg.rnn_hidden}, rng);
  p.bwd_h = glorot(ps, "encoder.rnn.bwd_h", {cfg.rnn_hidden, cfg.rnn_hidden}, rng);
  p.bwd_b = zeros(ps, "encoder.rnn.bwd_b", cfg.rnn_hidden);
  p.proj_w = glorot(ps, "encoder.rnn.proj_w", {2 * cfg.rnn_hidden, cfg.rnn_dim}, rng);
  p.proj_b = zeros(ps, "encoder.rnn.proj_b", cfg.rnn_dim);
  const std::size_t len = tunnel_feature_len(cfg, max_hops);
  p.tunnel_w = glorot(ps, "encoder.ftheta.tunnel_w", {len, cfg.tunnel_hidden}, rng);
  p.tunnel_b = zeros(ps, "encoder.ftheta.tunnel_b", cfg.tunnel_hidden);
  p.mix_w = glorot(ps, "encoder.ftheta.mix_w", {cfg.tunnel_hidden, cfg.rnn_dim * cfg.fused_dim}, rng);
  // Start W near a scaled identity-like map so early training sees R^D.
  std::vector<double> mix_b(cfg.rnn_dim * cfg.fused_dim, 0.0);
  for (std::size_t d = 0; d < std::min(cfg.rnn_dim, cfg.fused_dim); ++d) mix_b[d * cfg.fused_dim + d] = 1.0;
  const std::size_t mix_len = mix_b.size();
  p.mix_b = ps.add("encoder.ftheta.mix_b", kGroupEncoder, {1, mix_len}, std::move(mix_b));
  return p;
}

TopologyEncoding encode_topology(const TopologyContext& ctx, const EncoderParams& p) {
  Tensor h = ctx.initial_features;
  for (const auto& layer : p.gnn) {
    Tensor z = add(matmul(h, layer.self), matmul(matmul(ctx.in_mean, h), layer.in));
    z = add(z, matmul(matmul(ctx.out_mean, h), layer.out));
    h = relu(add(z, layer.bias));
  }
  TopologyEncoding enc;
  enc.node_features = h;
  const Tensor parts[] = {embed_lookup(h, ctx.tails), embed_lookup(h, ctx.heads), ctx.capacities};
  enc.edge_features = concat(parts, ad::Axis::cols);

  // One zero row appended for padded hops.
  const std::size_t width = enc.edge_features.cols();
  const Tensor padded_parts[] = {enc.edge_features, Tensor::constant({1, width}, 0.0)};
  const Tensor padded = concat(padded_parts, ad::Axis::rows);
  std::vector<Tensor> hops;
  for (const auto& ids : ctx.hop_edges) hops.push_back(embed_lookup(padded, ids));
  enc.tunnel_embeddings = hops.empty() ? Tensor::constant({ctx.tunnel_count, 0}, 0.0)
                                       : concat(hops, ad::Axis::cols);
  return enc;
}

Tensor flatten_history(const TopologyContext& ctx, std::span<const net::TrafficMatrix> history) {
  const std::size_t n = ctx.node_count;
  const std::size_t flat = n * (n - 1);
  std::vector<double> x(history.size() * flat);
  for (std::size_t s = 0; s < history.size(); ++s) {
    if (history[s].node_count() != n) throw ShapeError("history matrix has the wrong node count");
    std::size_t k = 0;
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        if (a == b) continue;
        x[s * flat + k++] = history[s](ctx.order.node_at[a], ctx.order.node_at[b]) / ctx.capacity_scale;
      }
    }
  }
  return Tensor::constant({history.size(), flat}, std::move(x));
}

Tensor encode_history(const TopologyContext& ctx, std::span<const net::TrafficMatrix> history,
                      const EncoderParams& p, const EncoderConfig& cfg) {
  if (history.empty()) throw ShapeError("empty history");
  if (history.size() != cfg.window) {
    throw ShapeError("history length " + std::to_string(history.size()) + " differs from window " +
                     std::to_string(cfg.window));
  }
  const Tensor x = flatten_history(ctx, history);
  if (x.cols() != p.hist_w.rows()) throw ShapeError("history width does not match trained parameters");
  const Tensor e = linear(x, p.hist_w, p.hist_b);
  const std::size_t steps = e.rows();
  std::vector<Tensor> fwd(steps), bwd(steps);
  Tensor h = Tensor::constant({1, cfg.rnn_hidden}, 0.0);
  for (std::size_t t = 0; t < steps; ++t) {
    const Tensor xt = slice(e, ad::Axis::rows, t, t + 1);
    h = tanh(add(add(matmul(xt, p.fwd_x), matmul(h, p.fwd_h)), p.fwd_b));
    fwd[t] = h;
  }
  h = Tensor::constant({1, cfg.rnn_hidden}, 0.0);
  for (std::size_t t = steps; t-- > 0;) {
    const Tensor xt = slice(e, ad::Axis::rows, t, t + 1);
    h = tanh(add(add(matmul(xt, p.bwd_x), matmul(h, p.bwd_h)), p.bwd_b));
    bwd[t] = h;
  }
  const Tensor states[] = {concat(fwd, ad::Axis::rows), concat(bwd, ad::Axis::rows)};
  return linear(concat(states, ad::Axis::cols), p.proj_w, p.proj_b);
}

Tensor reprojection_matrix(const Tensor& tunnel_embeddings, const EncoderParams& p,
                           const EncoderConfig& cfg) {
  if (tunnel_embeddings.rows() == 0) throw ShapeError("no tunnels to condition on");
  const Tensor hidden = relu(linear(tunnel_embeddings, p.tunnel_w, p.tunnel_b));
  const Tensor pooled =
      scale(reduce_sum(hidden, ad::Reduce::over_rows), 1.0 / static_cast<double>(hidden.rows()));
  return reshape(linear(pooled, p.mix_w, p.mix_b), {cfg.rnn_dim, cfg.fused_dim});
}

Tensor fuse_reproject(const Tensor& temporal, const Tensor& tunnel_embeddings, const EncoderParams& p,
                      const EncoderConfig& cfg) {
  return matmul(temporal, reprojection_matrix(tunnel_embeddings, p, cfg));
}

}  // namespace telab::model
