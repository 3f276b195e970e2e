#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "telab/net/tunnels.hpp"

namespace telab::net {

// Dense |V| x |V| demand matrix for one interval, row-major.
// Entries are nonnegative and the diagonal is zero.
class TrafficMatrix {
 public:
  TrafficMatrix() = default;
  explicit TrafficMatrix(std::size_t nodes) : n_(nodes), d_(nodes * nodes, 0.0) {}
  TrafficMatrix(std::size_t nodes, std::vector<double> row_major);

  std::size_t node_count() const { return n_; }
  double operator()(std::size_t s, std::size_t t) const { return d_[s * n_ + t]; }
  double& operator()(std::size_t s, std::size_t t) { return d_[s * n_ + t]; }
  std::span<const double> values() const { return d_; }
  std::span<double> values() { return d_; }

  double total() const;
  double max_entry() const;
  TrafficMatrix scaled(double factor) const;

  // Throws ValidationError on negative, non-finite or diagonal entries.
  void validate() const;

  friend bool operator==(const TrafficMatrix&, const TrafficMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> d_;
};

// Split ratios aligned with TunnelSet::pairs: ratios[i][j] is the share of
// pair i's demand sent over its j-th tunnel.
struct TeConfig {
  std::vector<std::vector<double>> ratios;

  friend bool operator==(const TeConfig&, const TeConfig&) = default;
};

// Equal split over each pair's tunnels.
TeConfig uniform_config(const TunnelSet& tunnels);

// Throws ShapeError when shapes differ from the tunnel set, ValidationError
// when a ratio is negative or a pair does not sum to 1 within `tol`.
void validate_config(const TunnelSet& tunnels, const TeConfig& cfg, double tol = 1e-6);

}  // namespace telab::net
