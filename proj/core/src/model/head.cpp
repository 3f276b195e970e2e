#include "telab/model/head.hpp"

#include <cmath>
#include <utility>
#include <vector>

#include "telab/ad/ops.hpp"
#include "telab/common/error.hpp"

namespace telab::model {

using ad::Tensor;

void HeadConfig::validate() const {
  if (hidden == 0) throw ValidationError("head hidden width must be positive");
  if (pe_dim == 0 || pe_dim % 2 != 0) throw ValidationError("head pe_dim must be even and positive");
}

HeadLayout make_head_layout(const net::Topology& topo, const net::TunnelSet& tunnels,
                            const CanonicalOrder& order) {
  HeadLayout l;
  l.node_count = tunnels.node_count;
  l.k = tunnels.k;
  l.pairs = tunnels.pairs.size();
  l.width = tunnels.max_tunnels_per_pair();
  if (l.width > l.k) throw ShapeError("tunnel set holds more than k tunnels for a pair");
  const std::size_t n = l.node_count;
  const std::size_t row = (n - 1) * l.k;
  for (std::size_t r = 0; r < n; ++r) l.origin_rank.push_back(r);
  l.gather.assign(l.pairs * l.width, 0);
  std::vector<double> mask(l.pairs * l.width, -1e30);
  for (std::size_t i = 0; i < l.pairs; ++i) {
    const auto& pair = tunnels.pairs[i];
    const std::size_t rs = order.rank_of.at(pair.src);
    const std::size_t rt = order.rank_of.at(pair.dst);
    const std::size_t slot = rt > rs ? rt - 1 : rt;
    std::vector<std::pair<std::size_t, std::vector<std::size_t>>> keys;
    for (const auto& t : pair.tunnels) {
      std::vector<std::size_t> ranks;
      for (auto v : t.nodes(topo)) ranks.push_back(order.rank_of.at(v));
      keys.emplace_back(t.hops(), std::move(ranks));
    }
    for (std::size_t j = 0; j < pair.tunnels.size(); ++j) {
      std::size_t position = 0;
      for (const auto& other : keys) position += other < keys[j] ? 1 : 0;
      l.gather[i * l.width + j] = rs * row + slot * l.k + position;
      mask[i * l.width + j] = 0.0;
    }
  }
  l.padding_mask = Tensor::constant({l.pairs, l.width}, std::move(mask));
  return l;
}

HeadParams init_head(ad::ParameterSet& params, const HeadConfig& cfg, std::size_t model_dim,
                     std::size_t node_count, std::size_t k, Rng& rng) {
  cfg.validate();
  const std::size_t in = model_dim + cfg.pe_dim;
  HeadParams p;
  p.w1 = params.add_gaussian("head.w1", kGroupHead, {in, cfg.hidden}, 1.0 / std::sqrt(static_cast<double>(in)), rng);
  p.b1 = params.add_constant("head.b1", kGroupHead, {1, cfg.hidden}, 0.0);
  // Small output weights: the untrained head starts near the uniform split.
  p.w2 = params.add_gaussian("head.w2", kGroupHead, {cfg.hidden, (node_count - 1) * k}, 0.01, rng);
  p.b2 = params.add_constant("head.b2", kGroupHead, {1, (node_count - 1) * k}, 0.0);
  return p;
}

Tensor head_forward(const Tensor& hidden, const HeadLayout& layout, const HeadParams& p,
                    const HeadConfig& cfg) {
  const std::size_t n = layout.node_count;
  if (hidden.rows() == 0) throw ShapeError("head needs at least one hidden row");
  if (p.w1.rows() != hidden.cols() + cfg.pe_dim) throw ShapeError("hidden width does not match head parameters");
  if (p.w2.cols() != (n - 1) * layout.k) throw ShapeError("head trained for another node count or k");
  const Tensor summary =
      scale(reduce_sum(hidden, ad::Reduce::over_rows), 1.0 / static_cast<double>(hidden.rows()));
  const Tensor ones = Tensor::constant({n, 1}, 1.0);
  std::vector<double> pe(n * cfg.pe_dim);
  for (std::size_t r = 0; r < n; ++r) {
    const auto code = ad::sinusoidal_pe(layout.origin_rank[r], cfg.pe_dim);
    std::copy(code.begin(), code.end(), pe.begin() + static_cast<std::ptrdiff_t>(r * cfg.pe_dim));
  }
  const Tensor parts[] = {matmul(ones, summary), Tensor::constant({n, cfg.pe_dim}, std::move(pe))};
  const Tensor inputs = concat(parts, ad::Axis::cols);
  const Tensor logits = linear(relu(linear(inputs, p.w1, p.b1)), p.w2, p.b2);
  const Tensor table = reshape(logits, {logits.size(), 1});
  const Tensor gathered = reshape(embed_lookup(table, layout.gather), {layout.pairs, layout.width});
  return row_softmax(add(gathered, layout.padding_mask));
}

MaskedRatios mask_failed_tunnels(const Tensor& ratios, const net::TunnelSet& tunnels,
                                 const std::set<net::EdgeIndex>& failed) {
  MaskedRatios out;
  if (failed.empty()) {
    out.ratios = ratios;
    return out;
  }
  const std::size_t pairs = ratios.rows(), width = ratios.cols();
  if (pairs != tunnels.pairs.size()) throw ShapeError("ratios do not match the tunnel set");
  std::vector<double> keep(pairs * width, 1.0);
  bool any = false;
  for (std::size_t i = 0; i < pairs; ++i) {
    const auto& ts = tunnels.pairs[i].tunnels;
    std::size_t alive = 0;
    bool hit = false;
    for (std::size_t j = 0; j < ts.size(); ++j) {
      bool down = false;
      for (auto e : ts[j].edges) down = down || failed.count(e) > 0;
      if (down) {
        keep[i * width + j] = 0.0;
        hit = true;
      } else {
        ++alive;
      }
    }
    if (alive == 0) {
      for (std::size_t j = 0; j < width; ++j) keep[i * width + j] = 1.0;
      out.disconnected.push_back(i);
    } else if (hit) {
      any = true;
    }
  }
  if (!any) {
    out.ratios = ratios;
    return out;
  }
  const Tensor masked = mul(ratios, Tensor::constant({pairs, width}, std::move(keep)));
  const Tensor sums = matmul(masked, Tensor::constant({width, 1}, 1.0));
  out.ratios = divide(masked, matmul(sums, Tensor::constant({1, width}, 1.0)));
  return out;
}

net::TeConfig to_config(const Tensor& ratios, const net::TunnelSet& tunnels) {
  if (ratios.rows() != tunnels.pairs.size()) throw ShapeError("ratios do not match the tunnel set");
  net::TeConfig cfg;
  for (std::size_t i = 0; i < tunnels.pairs.size(); ++i) {
    const std::size_t count = tunnels.pairs[i].tunnels.size();
    if (count > ratios.cols()) throw ShapeError("ratios narrower than the tunnel set");
    std::vector<double> r(count);
    for (std::size_t j = 0; j < count; ++j) r[j] = ratios.at(i, j);
    cfg.ratios.push_back(std::move(r));
  }
  return cfg;
}

}  // namespace telab::model
