#pragma once

// Closed-form channel, power, energy and age models. Everything here is a
// pure function of its arguments.

#include <span>
#include <vector>

#include "uavaoi/geometry.hpp"

namespace uavaoi {

/// Rotary-wing propulsion constants.
struct PropulsionParams {
    double blade_profile_power_w = 99.66;  ///< P0
    double induced_power_w = 120.16;       ///< P1, induced power in hover
    double tip_speed_mps = 120.0;
    double mean_induced_velocity_mps = 0.002;
    double fuselage_drag_ratio = 0.48;
    double air_density = 1.225;
    double rotor_solidity = 1e-4;
    double rotor_disk_area = 0.5;

    void validate() const;
};

/// Physical constants of the system, all in linear SI units.
struct SystemParams {
    double ref_channel_gain = 1000.0;  ///< g0 at 1 m (30 dB)
    double uav_altitude_m = 100.0;
    double bs_antenna_height_m = 15.0;
    double bandwidth_hz = 1e6;
    double packet_bits = 5e6;
    double noise_power_w = 1e-13;  ///< -100 dBm
    double battery_capacity_j = 10000.0;
    int battery_quanta = 200;
    double cell_size_m = 100.0;
    double cruise_speed_mps = 25.0;
    int max_age = 30;
    PropulsionParams propulsion{};
    double tradeoff_lambda = 0.0;
    double cluster_rate_bps = 25e6;  ///< per-cluster uplink rate R_b
    /// Unit (in watts) in which device power enters the reward. At 1 W the
    /// power term is ~1e-9 of the age term for realistic lambdas.
    double reward_power_unit_w = 1e-9;

    void validate() const;

    /// Slot length: time to fly between adjacent cell centres.
    double slot_duration_s() const { return cell_size_m / cruise_speed_mps; }
    /// Quanta per joule.
    double quanta_per_joule() const { return static_cast<double>(battery_quanta) / battery_capacity_j; }
};

/// Battery energy measured in quanta (one quantum = capacity / quanta joules).
struct EnergyQuanta {
    double value = 0.0;

    friend EnergyQuanta operator+(EnergyQuanta a, EnergyQuanta b) { return {a.value + b.value}; }
    friend EnergyQuanta operator*(double s, EnergyQuanta a) { return {s * a.value}; }
    friend auto operator<=>(EnergyQuanta, EnergyQuanta) = default;
};

double db_to_linear(double db);
double dbm_to_watts(double dbm);

/// Line-of-sight gain g0 / (|h_u - h_bs|^2 + |xy|^2) between a UAV and the BS.
double channel_gain_to_bs(Vec2 uav_xy, const SystemParams& params);

/// 2^(M/B) - 1. Throws NumericError when the power of two overflows.
double spectral_factor(const SystemParams& params);

/// Transmit power (W) a device needs to reach a UAV at horizontal distance `dist_m`.
double device_tx_power(double dist_m, const SystemParams& params);

/// (sqrt(1 + a^2) - a)^(1/2) with a = v^2 / (2 s0^2). For a > 1 the
/// rationalised form (1 / (sqrt(1 + a^2) + a))^(1/2) is used; the direct
/// difference loses every significant digit once a reaches ~1e8.
double induced_velocity_factor(double speed_mps, double mean_induced_velocity_mps);

/// Rotary-wing propulsion power (W) at level speed `speed_mps`.
double propulsion_power(double speed_mps, const PropulsionParams& pp);

/// Energy drawn from the battery during one slot flown at `speed_mps`.
/// Speed 0 is hovering; both last one slot.
EnergyQuanta flight_energy_quanta(double speed_mps, const SystemParams& params);

/// Energy to forward one update packet from `uav_xy` to the BS.
EnergyQuanta relay_energy_quanta(Vec2 uav_xy, const SystemParams& params);

/// One slot of battery evolution. The ceiling is applied once to the total
/// consumption; the result may go negative and the caller detects depletion.
int battery_step(int battery, bool scheduled, EnergyQuanta relay, EnergyQuanta flight);

/// Age update: served clusters (0-based indices) drop to 1, every other
/// entry grows by one and saturates at `max_age`.
std::vector<int> aoi_step(std::span<const int> aoi, std::span<const int> served, int max_age);

} // namespace uavaoi
