#pragma once

#include <set>
#include <vector>

#include "telab/ad/parameters.hpp"
#include "telab/model/canonical.hpp"
#include "telab/model/config.hpp"
#include "telab/net/traffic.hpp"

namespace telab::model {

// Where each (pair, tunnel) reads its logit. Origin v occupies row rank(v)
// of the per-origin output; destination t takes slot rank(t) among the
// other n-1 nodes, and each slot holds k tunnel logits. A pair's tunnels
// take those k logits in order of (hops, canonical ranks of their nodes),
// so the assignment does not depend on node labels.
struct HeadLayout {
  std::size_t node_count = 0;
  std::size_t k = 0;
  std::size_t pairs = 0;
  std::size_t width = 0;  // max tunnels per pair
  std::vector<std::size_t> origin_rank;  // rank per origin row (0..n-1)
  // pairs*width flat indices into the n x (n-1)k logit table (padding -> 0).
  std::vector<std::size_t> gather;
  // pairs x width: 0 for real tunnels, -1e30 for padding.
  ad::Tensor padding_mask;
};

HeadLayout make_head_layout(const net::Topology& topo, const net::TunnelSet& tunnels,
                            const CanonicalOrder& order);

struct HeadParams {
  ad::Tensor w1, b1, w2, b2;
};

HeadParams init_head(ad::ParameterSet& params, const HeadConfig& cfg, std::size_t model_dim,
                     std::size_t node_count, std::size_t k, Rng& rng);

// Mean of `hidden` rows as the summary; each origin row [summary; PE(rank)]
// goes through the shared two-layer MLP; per-pair softmax over its tunnel
// logits. Returns pairs x width split ratios (zeros in padded columns).
ad::Tensor head_forward(const ad::Tensor& hidden, const HeadLayout& layout, const HeadParams& p,
                        const HeadConfig& cfg);

// Zeroes tunnels that cross a failed link and renormalizes each pair over
// its survivors in proportion to their ratios (same rule as
// net::apply_failures). Pairs that lost every tunnel keep their ratios and
// are listed in `disconnected` (indices into TunnelSet::pairs).
struct MaskedRatios {
  ad::Tensor ratios;
  std::vector<std::size_t> disconnected;
};
MaskedRatios mask_failed_tunnels(const ad::Tensor& ratios, const net::TunnelSet& tunnels,
                                 const std::set<net::EdgeIndex>& failed);

// Ratio tensor (pairs x width) to a configuration over `tunnels`.
net::TeConfig to_config(const ad::Tensor& ratios, const net::TunnelSet& tunnels);

}  // namespace telab::model
