#include "telab/net/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "telab/common/error.hpp"

namespace telab::net {

TrafficMatrix::TrafficMatrix(std::size_t nodes, std::vector<double> row_major)
    : n_(nodes), d_(std::move(row_major)) {
  if (d_.size() != n_ * n_) {
    throw ShapeError("traffic matrix needs " + std::to_string(n_ * n_) + " entries, got " +
                     std::to_string(d_.size()));
  }
}

double TrafficMatrix::total() const {
  double s = 0.0;
  for (double v : d_) s += v;
  return s;
}

double TrafficMatrix::max_entry() const {
  return d_.empty() ? 0.0 : *std::max_element(d_.begin(), d_.end());
}

TrafficMatrix TrafficMatrix::scaled(double factor) const {
  TrafficMatrix out = *this;
  for (double& v : out.d_) v *= factor;
  return out;
}

void TrafficMatrix::validate() const {
  for (std::size_t s = 0; s < n_; ++s) {
    for (std::size_t t = 0; t < n_; ++t) {
      const double v = (*this)(s, t);
      if (!std::isfinite(v) || v < 0.0) {
        throw ValidationError("demand (" + std::to_string(s) + "," + std::to_string(t) +
                              ") is negative or non-finite");
      }
      if (s == t && v != 0.0) throw ValidationError("traffic matrix diagonal must be zero");
    }
  }
}

TeConfig uniform_config(const TunnelSet& tunnels) {
  TeConfig cfg;
  cfg.ratios.reserve(tunnels.pairs.size());
  for (const auto& p : tunnels.pairs) {
    const std::size_t m = p.tunnels.size();
    cfg.ratios.emplace_back(m, m == 0 ? 0.0 : 1.0 / static_cast<double>(m));
  }
  return cfg;
}

void validate_config(const TunnelSet& tunnels, const TeConfig& cfg, double tol) {
  if (cfg.ratios.size() != tunnels.pairs.size()) {
    throw ShapeError("configuration has " + std::to_string(cfg.ratios.size()) +
                     " pairs, tunnel set has " + std::to_string(tunnels.pairs.size()));
  }
  for (std::size_t i = 0; i < cfg.ratios.size(); ++i) {
    const auto& r = cfg.ratios[i];
    if (r.size() != tunnels.pairs[i].tunnels.size()) {
      throw ShapeError("pair " + std::to_string(i) + " has " + std::to_string(r.size()) +
                       " ratios for " + std::to_string(tunnels.pairs[i].tunnels.size()) +
                       " tunnels");
    }
    double sum = 0.0;
    for (double v : r) {
      if (!(v >= 0.0)) throw ValidationError("negative split ratio in pair " + std::to_string(i));
      sum += v;
    }
    if (std::abs(sum - 1.0) > tol) {
      throw ValidationError("split ratios of pair " + std::to_string(i) + " sum to " +
                            std::to_string(sum));
    }
  }
}

}  // namespace telab::net
