#include "cli/report.hpp"

#include <sstream>

#include "telab/common/error.hpp"
#include "telab/net/io.hpp"

namespace telab::cli {

namespace {

constexpr const char* kReportSchema = "telab-eval-report/1";

std::optional<double> degradation(double value, double base) {
  if (!(base > 0.0)) return std::nullopt;
  return 100.0 * (value - base) / base;
}

std::string cell(const std::optional<double>& v) { return v ? net::format_double(*v) : std::string(); }

nlohmann::json cell_json(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(); }

}  // namespace

Comparison emit_report(const std::vector<nlohmann::json>& reports) {
  Comparison out;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& r = reports[i];
    if (!r.is_object() || r.value("schema", std::string()) != kReportSchema) {
      throw ValidationError("report " + std::to_string(i + 1) + " is not a " + kReportSchema + " document");
    }
    try {
      ComparisonRow row;
      row.scenario = r.at("scenario").get<std::string>();
      row.policy = r.at("policy").get<std::string>();
      row.mean = r.at("mean").get<double>();
      row.median = r.at("median").get<double>();
      row.p95 = r.at("p95").get<double>();
      row.count = r.at("count").get<std::size_t>();
      out.rows.push_back(row);
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError("report " + std::to_string(i + 1) + ": " + e.what());
    }
  }
  for (auto& row : out.rows) {
    const ComparisonRow* base = nullptr;
    for (const auto& b : out.rows) {
      if (b.scenario == "normal" && b.policy == row.policy) {
        base = &b;
        break;
      }
    }
    if (!base) continue;
    row.mean_degradation = degradation(row.mean, base->mean);
    row.median_degradation = degradation(row.median, base->median);
    row.p95_degradation = degradation(row.p95, base->p95);
  }
  return out;
}

std::string Comparison::to_csv() const {
  std::ostringstream s;
  s << "scenario,policy,mean,median,p95,count,mean_degradation_pct,median_degradation_pct,p95_degradation_pct\n";
  for (const auto& r : rows) {
    s << r.scenario << ',' << r.policy << ',' << net::format_double(r.mean) << ',' << net::format_double(r.median)
      << ',' << net::format_double(r.p95) << ',' << r.count << ',' << cell(r.mean_degradation) << ','
      << cell(r.median_degradation) << ',' << cell(r.p95_degradation) << '\n';
  }
  return s.str();
}

nlohmann::ordered_json Comparison::to_json() const {
  nlohmann::ordered_json j;
  j["schema"] = "telab-comparison/1";
  auto arr = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json row;
    row["scenario"] = r.scenario;
    row["policy"] = r.policy;
    row["mean"] = r.mean;
    row["median"] = r.median;
    row["p95"] = r.p95;
    row["count"] = r.count;
    row["mean_degradation_pct"] = cell_json(r.mean_degradation);
    row["median_degradation_pct"] = cell_json(r.median_degradation);
    row["p95_degradation_pct"] = cell_json(r.p95_degradation);
    arr.push_back(row);
  }
  j["rows"] = arr;
  return j;
}

}  // namespace telab::cli
