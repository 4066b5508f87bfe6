#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "uavaoi/clustering.hpp"
#include "uavaoi/environment.hpp"
#include "uavaoi/physics.hpp"
#include "uavaoi/training.hpp"

namespace uavaoi {

/// Physical parameters in the units they are usually quoted in (dB, dBm).
struct PhysicsConfig {
    double battery_capacity_j = 10000.0;
    int battery_quanta = 200;
    int max_age = 30;
    double ref_gain_db = 30.0;
    double uav_altitude_m = 100.0;
    double bs_antenna_height_m = 15.0;
    double bandwidth_hz = 1e6;
    double packet_bits = 5e6;
    double noise_dbm = -100.0;
    double cruise_speed_mps = 25.0;
    PropulsionParams propulsion{};
    double cluster_rate_bps = 0.0;  ///< required
    double reward_power_unit_w = 1e-9;
    bool relay_per_device = false;
};

struct SeedConfig {
    std::uint64_t scenario = 1;
    std::uint64_t training = 1;
    std::uint64_t evaluation = 1;
};

struct ExperimentConfig {
    GridSpec grid{};
    int devices = 100;
    int uavs = 2;
    PhysicsConfig physics{};
    std::vector<double> lambdas{0.0};
    std::string importance = "uniform";  ///< "uniform" (1/K) or "random" (normalised U(0,1))
    DqnConfig dqn{};
    KMeansOptions kmeans{};
    SeedConfig seeds{};
    int eval_episodes = 50;
    int max_slots = 200;
    std::string output_dir = "runs/default";

    /// Throws ConfigError on any violated precondition.
    void validate() const;
    SystemParams system_params(double lambda) const;
    EnvOptions env_options() const;
};

nlohmann::json to_json(const ExperimentConfig& cfg);
/// Keys absent from `j` keep their defaults; unknown keys are rejected.
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Desk-scale profile: 5x5 grid, K = 20, U = 1, four clusters, 3000 episodes, 60-slot cap.
ExperimentConfig desk_profile();

/// 16 hex digits of FNV-1a over the canonical JSON dump, output_dir excluded.
std::string config_hash(const ExperimentConfig& cfg);

} // namespace uavaoi
