#include <algorithm>
#include <cmath>
#include <random>

#include "telab/common/error.hpp"
#include "telab/common/rng.hpp"
#include "telab/tm/series.hpp"

namespace telab::tm {

namespace {
// Guards floor() against representation error in products like 0.8 * 10.
std::size_t floor_fraction(double fraction, std::size_t length) {
  return static_cast<std::size_t>(std::floor(fraction * static_cast<double>(length) + 1e-9));
}
}  // namespace

DatasetSplit split_dataset(std::size_t length, std::array<double, 3> ratios) {
  double sum = 0.0;
  for (double r : ratios) {
    if (!(r > 0.0)) throw ValidationError("split ratios must be positive");
    sum += r;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw ValidationError("split ratios must sum to 1");
  const std::size_t a = floor_fraction(ratios[0], length);
  const std::size_t b = floor_fraction(ratios[0] + ratios[1], length);
  DatasetSplit split{{0, a}, {a, b}, {b, length}};
  if (split.train.size() == 0 || split.validation.size() == 0 || split.test.size() == 0) {
    throw ValidationError("series of length " + std::to_string(length) +
                          " is too short for the requested split");
  }
  return split;
}

std::vector<HistorySample> make_history_windows(const TrafficSeries& series, IndexRange range,
                                                std::size_t window) {
  if (window == 0) throw ValidationError("history window must be at least 1");
  if (range.end > series.size() || range.begin > range.end) {
    throw ValidationError("sample range exceeds the series");
  }
  if (range.begin < window) {
    throw ValidationError("range starting at " + std::to_string(range.begin) +
                          " lacks a lead-in of " + std::to_string(window) + " intervals");
  }
  std::vector<HistorySample> samples;
  samples.reserve(range.size());
  for (std::size_t t = range.begin; t < range.end; ++t) {
    HistorySample s;
    s.target_index = t;
    s.history.assign(series.matrices.begin() + static_cast<std::ptrdiff_t>(t - window),
                     series.matrices.begin() + static_cast<std::ptrdiff_t>(t));
    s.target = series.matrices[t];
    samples.push_back(std::move(s));
  }
  return samples;
}

bool is_protocol_burst_scale(double scale) {
  return std::find(kBurstScales.begin(), kBurstScales.end(), scale) != kBurstScales.end();
}

TrafficSeries inject_burst(const TrafficSeries& series, double scale, std::uint64_t seed) {
  if (!(scale > 0.0)) throw ValidationError("burst scale must be positive");
  if (series.size() < 2) throw ValidationError("burst injection needs at least two intervals");
  const std::size_t n = series.node_count();
  const double len = static_cast<double>(series.size());
  std::vector<double> stddev(n * n, 0.0);
  for (std::size_t k = 0; k < n * n; ++k) {
    double mean = 0.0;
    for (const auto& m : series.matrices) mean += m.values()[k];
    mean /= len;
    double var = 0.0;
    for (const auto& m : series.matrices) {
      const double d = m.values()[k] - mean;
      var += d * d;
    }
    var /= len;
    stddev[k] = std::sqrt(scale * var);
  }
  Rng rng = make_rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  TrafficSeries out = series;
  out.provenance = series.provenance + "+burst";
  for (auto& m : out.matrices) {
    auto values = m.values();
    for (std::size_t k = 0; k < n * n; ++k) {
      if (stddev[k] == 0.0) continue;
      values[k] = std::max(0.0, values[k] + stddev[k] * normal(rng));
    }
  }
  return out;
}

std::string to_string(DriftSegment segment) {
  switch (segment) {
    case DriftSegment::first_quarter: return "0-25";
    case DriftSegment::second_quarter: return "25-50";
    case DriftSegment::third_quarter: return "50-75";
  }
  return "?";
}

DriftSegment parse_drift_segment(const std::string& text) {
  if (text == "0-25") return DriftSegment::first_quarter;
  if (text == "25-50") return DriftSegment::second_quarter;
  if (text == "50-75") return DriftSegment::third_quarter;
  throw ValidationError("unknown drift segment '" + text + "' (expected 0-25, 25-50 or 50-75)");
}

DatasetSplit segment_for_drift(std::size_t length, DriftSegment segment) {
  if (length < 20) throw ValidationError("drift segmentation needs at least 20 intervals");
  const double lo = segment == DriftSegment::first_quarter    ? 0.0
                    : segment == DriftSegment::second_quarter ? 0.25
                                                              : 0.5;
  return DatasetSplit{{floor_fraction(lo, length), floor_fraction(lo + 0.25, length)},
                      {floor_fraction(0.75, length), floor_fraction(0.85, length)},
                      {floor_fraction(0.85, length), length}};
}

}  // namespace telab::tm
