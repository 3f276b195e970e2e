#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "telab/net/traffic.hpp"

namespace telab::model {

// Lowercased whitespace-separated words with surrounding punctuation
// stripped, hashed (FNV-1a) into ids 1..vocab_size-1. Id 0 is the unknown
// token, used for words that are empty after stripping.
class Tokenizer {
 public:
  explicit Tokenizer(std::size_t vocab_size);
  std::size_t vocab_size() const { return vocab_; }
  std::vector<std::size_t> encode(std::string_view text) const;
  std::size_t token_id(std::string_view word) const;

  static constexpr std::size_t kUnknown = 0;

 private:
  std::size_t vocab_;
};

// Ad hoc operating conditions announced in the prompt.
struct Constraints {
  std::set<net::EdgeIndex> failed_links;
  std::optional<double> burst_scale;

  bool empty() const { return failed_links.empty() && !burst_scale; }
};

struct Prompt {
  std::string role;
  std::string topology_summary;
  std::string tm_statistics;
  std::vector<std::string> constraint_lines;
  std::vector<std::size_t> tokens;
  // Constraint lines dropped (most recent first) to respect the limit.
  std::size_t dropped_constraints = 0;
  bool truncated() const { return dropped_constraints > 0; }

  std::string text() const;
};

inline constexpr std::string_view kRoleLine = "You are a WAN traffic engineer.";

// "Link <tail>-<head> is currently down." using node names.
std::string failure_line(const net::Topology& topo, net::EdgeIndex e);

// Renders the template and tokenizes it. When the token count exceeds
// max_tokens, constraint lines are removed last-in-first-out; if the
// prompt is still too long without any constraint, ValidationError.
Prompt build_prompt(const net::Topology& topo, const net::TunnelSet& tunnels,
                    std::span<const net::TrafficMatrix> history, const Constraints& constraints,
                    const Tokenizer& tokenizer, std::size_t max_tokens);

}  // namespace telab::model
