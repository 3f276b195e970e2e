#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "telab/ad/parameters.hpp"
#include "telab/model/canonical.hpp"
#include "telab/model/config.hpp"
#include "telab/net/traffic.hpp"

namespace telab::model {

// Constant tensors and index maps derived from one (topology, tunnel set).
struct TopologyContext {
  std::size_t node_count = 0;
  std::size_t edge_count = 0;
  std::size_t tunnel_count = 0;
  std::size_t max_hops = 0;
  // Mean link capacity; capacities and demands enter the model divided by it.
  double capacity_scale = 1.0;
  CanonicalOrder order;
  // n x 4 rows [in-degree, out-degree, incident capacity, 1].
  ad::Tensor initial_features;
  // Row-normalized aggregation over in-neighbors / out-neighbors (n x n).
  ad::Tensor in_mean;
  ad::Tensor out_mean;
  std::vector<std::size_t> tails;
  std::vector<std::size_t> heads;
  // m x 1 normalized capacities.
  ad::Tensor capacities;
  // hop_edges[h][p] = edge at hop h of tunnel p (TunnelSet order), or
  // edge_count for padding beyond the tunnel's length.
  std::vector<std::vector<std::size_t>> hop_edges;
};

TopologyContext make_topology_context(const net::Topology& topo, const net::TunnelSet& tunnels);

// Width L of a tunnel embedding: max_hops edge features of 2*gnn_dim+1.
std::size_t tunnel_feature_len(const EncoderConfig& cfg, std::size_t max_hops);

struct EncoderParams {
  struct GnnLayer {
    ad::Tensor self, in, out, bias;
  };
  std::vector<GnnLayer> gnn;
  ad::Tensor hist_w, hist_b;
  ad::Tensor fwd_x, fwd_h, fwd_b;
  ad::Tensor bwd_x, bwd_h, bwd_b;
  ad::Tensor proj_w, proj_b;
  // f_theta: per-tunnel layer, mean pool, then output layer to D*C.
  ad::Tensor tunnel_w, tunnel_b, mix_w, mix_b;
};

EncoderParams init_encoder(ad::ParameterSet& params, const EncoderConfig& cfg,
                           std::size_t node_count, std::size_t max_hops, Rng& rng);

struct TopologyEncoding {
  ad::Tensor node_features;      // n x gnn_dim
  ad::Tensor edge_features;      // m x (2 gnn_dim + 1), rows [h_tail; h_head; c]
  ad::Tensor tunnel_embeddings;  // P x L
};

TopologyEncoding encode_topology(const TopologyContext& ctx, const EncoderParams& p);

// Off-diagonal entries of each matrix in canonical node order, divided by
// the capacity scale; S x n(n-1).
ad::Tensor flatten_history(const TopologyContext& ctx, std::span<const net::TrafficMatrix> history);

// R^D (S x D): linear embedding per interval, bidirectional tanh recurrence,
// per-step projection of [forward; backward] states.
ad::Tensor encode_history(const TopologyContext& ctx, std::span<const net::TrafficMatrix> history,
                          const EncoderParams& p, const EncoderConfig& cfg);

// The D x C matrix W = phi(f_theta(R^T)).
ad::Tensor reprojection_matrix(const ad::Tensor& tunnel_embeddings, const EncoderParams& p,
                               const EncoderConfig& cfg);

// R^F = R^D W  (S x C).
ad::Tensor fuse_reproject(const ad::Tensor& temporal, const ad::Tensor& tunnel_embeddings,
                          const EncoderParams& p, const EncoderConfig& cfg);

}  // namespace telab::model
