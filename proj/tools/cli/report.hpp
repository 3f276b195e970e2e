#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace telab::cli {

struct ComparisonRow {
  std::string scenario;
  std::string policy;
  double mean = 0.0;
  double median = 0.0;
  double p95 = 0.0;
  std::size_t count = 0;
  // 100 * (value - baseline) / baseline against the normal-case row of the
  // same policy; empty without such a row.
  std::optional<double> mean_degradation;
  std::optional<double> median_degradation;
  std::optional<double> p95_degradation;
};

struct Comparison {
  std::vector<ComparisonRow> rows;
  std::string to_csv() const;
  nlohmann::ordered_json to_json() const;
};

// Combines EvalReport summaries (as written by `eval`). Throws
// ValidationError when a document is not an eval report summary.
Comparison emit_report(const std::vector<nlohmann::json>& reports);

}  // namespace telab::cli
