#include <cmath>
#include <numbers>
#include <random>

#include "telab/common/error.hpp"
#include "telab/common/rng.hpp"
#include "telab/tm/series.hpp"

namespace telab::tm {

void TrafficSeries::validate() const {
  if (matrices.empty()) throw ValidationError("traffic series is empty");
  const std::size_t n = matrices.front().node_count();
  for (const auto& m : matrices) {
    if (m.node_count() != n) throw ShapeError("traffic series mixes matrix dimensions");
    m.validate();
  }
}

void GravitySpec::validate(std::size_t node_count) const {
  if (node_masses.size() != node_count) {
    throw ValidationError("gravity spec has " + std::to_string(node_masses.size()) +
                          " masses for " + std::to_string(node_count) + " nodes");
  }
  for (double m : node_masses) {
    if (!(m > 0.0)) throw ValidationError("gravity masses must be positive");
  }
  if (!(total_volume > 0.0)) throw ValidationError("total volume must be positive");
  if (season_period < 1) throw ValidationError("season period must be at least 1");
  if (!(noise_std >= 0.0)) throw ValidationError("noise std must be nonnegative");
  if (!(season_amplitude >= 0.0)) throw ValidationError("season amplitude must be nonnegative");
}

std::vector<double> default_masses(const net::Topology& topo) {
  std::vector<double> m(topo.node_count());
  for (std::size_t i = 0; i < m.size(); ++i) {
    m[i] = static_cast<double>(topo.out_edges(static_cast<net::NodeIndex>(i)).size()) + 1.0;
  }
  return m;
}

TrafficSeries generate_gravity_series(const net::Topology& topo, const GravitySpec& spec,
                                      std::size_t length) {
  const std::size_t n = topo.node_count();
  spec.validate(n);
  if (length == 0) throw ValidationError("series length must be at least 1");

  double mass_products = 0.0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (a != b) mass_products += spec.node_masses[a] * spec.node_masses[b];

  std::vector<double> base(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) base[i * n + j] = spec.total_volume * spec.node_masses[i] * spec.node_masses[j] / mass_products;

  Rng rng = make_rng(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  TrafficSeries series;
  series.provenance = "gravity";
  series.matrices.reserve(length);
  const double period = static_cast<double>(spec.season_period);
  for (std::size_t t = 0; t < length; ++t) {
    const double td = static_cast<double>(t);
    const double s = 1.0 + spec.trend_slope * td +
                     spec.season_amplitude * std::sin(2.0 * std::numbers::pi * td / period);
    TrafficMatrix tm(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        const double b = base[i * n + j];
        double v = b * s;
        if (spec.noise_std > 0.0) v += spec.noise_std * b * normal(rng);
        tm(i, j) = std::max(0.0, v);
      }
    }
    series.matrices.push_back(std::move(tm));
  }
  return series;
}

}  // namespace telab::tm
