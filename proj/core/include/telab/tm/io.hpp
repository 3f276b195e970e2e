#pragma once

#include <filesystem>
#include <optional>

#include <nlohmann/json.hpp>

#include "telab/tm/series.hpp"

namespace telab::tm {

nlohmann::ordered_json gravity_to_json(const GravitySpec& spec);
GravitySpec gravity_from_json(const nlohmann::json& doc);

// Writes <stem>.csv (net-core traffic CSV) and <stem>.json (sidecar with
// the gravity spec, seed, length and provenance tag).
void save_series(const std::filesystem::path& csv_path, const net::Topology& topo,
                 const TrafficSeries& series, const std::optional<GravitySpec>& spec);

TrafficSeries load_series(const std::filesystem::path& csv_path, const net::Topology& topo);

std::filesystem::path sidecar_path(const std::filesystem::path& csv_path);

}  // namespace telab::tm
