#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "uavaoi/clustering.hpp"
#include "uavaoi/config.hpp"
#include "uavaoi/environment.hpp"

namespace uavaoi {

/// Device layout plus its clustering, as persisted in scenario.json.
struct Scenario {
    std::uint64_t seed = 0;
    std::string config_hash;
    GridSpec grid{};
    std::vector<Device> devices;
    ClusterAssignment assignment;
};

/// K devices uniform over the grid area, capacity from the rate-mobility
/// bound, capacitated k-means clustering. Deterministic in (config, seed).
Scenario generate_scenario(const ExperimentConfig& cfg, std::uint64_t seed);

/// Re-run the clustering of an existing device layout.
Scenario recluster(Scenario scenario, const ExperimentConfig& cfg, std::uint64_t seed);

nlohmann::json to_json(const Scenario& s);
Scenario scenario_from_json(const nlohmann::json& j);

void save_scenario(const std::filesystem::path& path, const Scenario& s);
Scenario load_scenario(const std::filesystem::path& path);

Environment make_environment(const ExperimentConfig& cfg, const Scenario& scenario, double lambda);

/// Write through a temporary file and rename, so readers never see a partial file.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

} // namespace uavaoi
