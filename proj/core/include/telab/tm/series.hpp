#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "telab/net/traffic.hpp"

namespace telab::tm {

using net::TrafficMatrix;

// Half-open interval [begin, end) of interval indices.
struct IndexRange {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  bool contains(std::size_t i) const { return i >= begin && i < end; }
  friend bool operator==(const IndexRange&, const IndexRange&) = default;
};

// Time-ordered demand matrices of equal dimension.
struct TrafficSeries {
  std::vector<TrafficMatrix> matrices;
  std::string provenance;

  std::size_t size() const { return matrices.size(); }
  std::size_t node_count() const { return matrices.empty() ? 0 : matrices.front().node_count(); }
  const TrafficMatrix& operator[](std::size_t i) const { return matrices[i]; }

  // Nonempty, equal dimensions, every matrix valid.
  void validate() const;

  friend bool operator==(const TrafficSeries& a, const TrafficSeries& b) {
    return a.matrices == b.matrices;
  }
};

struct GravitySpec {
  std::vector<double> node_masses;
  double total_volume = 1.0;
  double trend_slope = 0.0;
  double season_amplitude = 0.0;
  std::size_t season_period = 24;
  double noise_std = 0.0;
  std::uint64_t seed = 0;

  void validate(std::size_t node_count) const;
};

// Node masses of (out-degree + 1).
std::vector<double> default_masses(const net::Topology& topo);

// D_t[i][j] = max(0, base_ij * s(t) + eps) with
//   base_ij = total_volume * m_i m_j / sum_{a != b} m_a m_b,
//   s(t)    = 1 + trend_slope * t + season_amplitude * sin(2 pi t / period),
//   eps     ~ Normal(0, noise_std * base_ij).
// Noise is drawn in (t, i, j) order from a generator seeded by spec.seed.
TrafficSeries generate_gravity_series(const net::Topology& topo, const GravitySpec& spec,
                                      std::size_t length);

struct DatasetSplit {
  IndexRange train;
  IndexRange validation;
  IndexRange test;
  friend bool operator==(const DatasetSplit&, const DatasetSplit&) = default;
};

// Contiguous chronological split; boundaries are floor(cumulative ratio * length).
DatasetSplit split_dataset(std::size_t length, std::array<double, 3> ratios);
inline DatasetSplit split_dataset(const TrafficSeries& series, std::array<double, 3> ratios) {
  return split_dataset(series.size(), ratios);
}

struct HistorySample {
  std::size_t target_index = 0;
  // Matrices target-window .. target-1, oldest first.
  std::vector<TrafficMatrix> history;
  TrafficMatrix target;
};

// One sample per target index in `range`. Throws ValidationError when the
// first target lacks `window` matrices of lead-in.
std::vector<HistorySample> make_history_windows(const TrafficSeries& series, IndexRange range,
                                                std::size_t window);

// Burst scales accepted by the evaluation protocol.
inline constexpr std::array<double, 5> kBurstScales{2.0, 5.0, 10.0, 20.0, 30.0};
bool is_protocol_burst_scale(double scale);

// Adds Normal(0, scale * v_ij) noise (v_ij: temporal variance of pair (i,j)
// over the series) to every entry at every interval, clamping at zero.
TrafficSeries inject_burst(const TrafficSeries& series, double scale, std::uint64_t seed);

enum class DriftSegment { first_quarter, second_quarter, third_quarter };

// "0-25", "25-50", "50-75".
std::string to_string(DriftSegment segment);
DriftSegment parse_drift_segment(const std::string& text);

// train = chosen quarter, validation = [75%, 85%), test = [85%, 100%).
DatasetSplit segment_for_drift(std::size_t length, DriftSegment segment);

}  // namespace telab::tm
