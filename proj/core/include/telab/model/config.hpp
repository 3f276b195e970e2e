#pragma once

#include <cstddef>

namespace telab::model {

struct EncoderConfig {
  std::size_t gnn_layers = 2;
  std::size_t gnn_dim = 8;
  // History window S.
  std::size_t window = 12;
  // Per-interval embedding width before the recurrent pass.
  std::size_t history_embed = 16;
  // Hidden width of each recurrent direction.
  std::size_t rnn_hidden = 16;
  // Temporal embedding width D.
  std::size_t rnn_dim = 16;
  // Fused width C.
  std::size_t fused_dim = 16;
  // Hidden width of the per-tunnel network inside f_theta.
  std::size_t tunnel_hidden = 32;

  void validate() const;
};

struct AlignmentConfig {
  std::size_t heads = 4;
  std::size_t head_dim = 16;
  // Rows of the projected prototype bank R^N.
  std::size_t prototypes = 32;
  std::size_t vocab_size = 1024;

  void validate() const;
};

struct BackboneConfig {
  std::size_t layers = 4;
  std::size_t model_dim = 64;
  std::size_t heads = 4;
  std::size_t mlp_hidden = 128;
  std::size_t max_sequence = 128;
  bool causal = true;

  void validate() const;
};

struct HeadConfig {
  std::size_t hidden = 64;
  std::size_t pe_dim = 16;

  void validate() const;
};

struct ModelConfig {
  EncoderConfig encoder;
  AlignmentConfig alignment;
  BackboneConfig backbone;
  HeadConfig head;
  std::size_t max_prompt_tokens = 96;

  void validate() const;
};

// Parameter groups. The two frozen groups never change after construction.
inline constexpr const char* kGroupEncoder = "encoder";
inline constexpr const char* kGroupAlignment = "alignment";
inline constexpr const char* kGroupHead = "head";
inline constexpr const char* kGroupBackbone = "backbone";
inline constexpr const char* kGroupPrototypes = "prototypes";

}  // namespace telab::model
