#include "telab/tm/io.hpp"

#include "telab/common/error.hpp"
#include "telab/net/io.hpp"

namespace telab::tm {

nlohmann::ordered_json gravity_to_json(const GravitySpec& spec) {
  return {{"node_masses", spec.node_masses},       {"total_volume", spec.total_volume},
          {"trend_slope", spec.trend_slope},       {"season_amplitude", spec.season_amplitude},
          {"season_period", spec.season_period},   {"noise_std", spec.noise_std},
          {"seed", spec.seed}};
}

GravitySpec gravity_from_json(const nlohmann::json& doc) {
  GravitySpec spec;
  try {
    spec.node_masses = doc.value("node_masses", std::vector<double>{});
    spec.total_volume = doc.value("total_volume", spec.total_volume);
    spec.trend_slope = doc.value("trend_slope", spec.trend_slope);
    spec.season_amplitude = doc.value("season_amplitude", spec.season_amplitude);
    spec.season_period = doc.value("season_period", spec.season_period);
    spec.noise_std = doc.value("noise_std", spec.noise_std);
    spec.seed = doc.value("seed", spec.seed);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("gravity spec: ") + e.what());
  }
  return spec;
}

std::filesystem::path sidecar_path(const std::filesystem::path& csv_path) {
  auto p = csv_path;
  p.replace_extension(".json");
  return p;
}

void save_series(const std::filesystem::path& csv_path, const net::Topology& topo,
                 const TrafficSeries& series, const std::optional<GravitySpec>& spec) {
  net::write_text_file(csv_path, net::traffic_to_csv(topo, series.matrices));
  nlohmann::ordered_json side;
  side["length"] = series.size();
  side["nodes"] = std::vector<std::string>(topo.node_names().begin(), topo.node_names().end());
  side["provenance"] = series.provenance;
  if (spec) {
    side["gravity"] = gravity_to_json(*spec);
    side["seed"] = spec->seed;
  }
  net::write_text_file(sidecar_path(csv_path), side.dump(2) + "\n");
}

TrafficSeries load_series(const std::filesystem::path& csv_path, const net::Topology& topo) {
  TrafficSeries series;
  series.matrices = net::traffic_from_csv(net::read_text_file(csv_path), topo);
  series.provenance = csv_path.filename().string();
  series.validate();
  return series;
}

}  // namespace telab::tm
