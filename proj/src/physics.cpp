#include "uavaoi/physics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "uavaoi/errors.hpp"

namespace uavaoi {

namespace {

void require_positive(double value, const char* name) {
    if (!(value > 0.0) || !std::isfinite(value))
        throw ConfigError(std::string(name) + " must be finite and strictly positive");
}

} // namespace

void PropulsionParams::validate() const {
    require_positive(blade_profile_power_w, "propulsion.blade_profile_power_w");
    require_positive(induced_power_w, "propulsion.induced_power_w");
    require_positive(tip_speed_mps, "propulsion.tip_speed_mps");
    require_positive(mean_induced_velocity_mps, "propulsion.mean_induced_velocity_mps");
    require_positive(fuselage_drag_ratio, "propulsion.fuselage_drag_ratio");
    require_positive(air_density, "propulsion.air_density");
    require_positive(rotor_solidity, "propulsion.rotor_solidity");
    require_positive(rotor_disk_area, "propulsion.rotor_disk_area");
}

void SystemParams::validate() const {
    require_positive(ref_channel_gain, "ref_channel_gain");
    require_positive(uav_altitude_m, "uav_altitude_m");
    require_positive(bs_antenna_height_m, "bs_antenna_height_m");
    require_positive(bandwidth_hz, "bandwidth_hz");
    require_positive(packet_bits, "packet_bits");
    require_positive(noise_power_w, "noise_power_w");
    require_positive(battery_capacity_j, "battery_capacity_j");
    require_positive(cell_size_m, "cell_size_m");
    require_positive(cruise_speed_mps, "cruise_speed_mps");
    require_positive(cluster_rate_bps, "cluster_rate_bps");
    require_positive(reward_power_unit_w, "reward_power_unit_w");
    if (battery_quanta < 1) throw ConfigError("battery_quanta must be >= 1");
    if (max_age < 1) throw ConfigError("max_age must be >= 1");
    if (!std::isfinite(tradeoff_lambda) || tradeoff_lambda < 0.0)
        throw ConfigError("tradeoff_lambda must be finite and non-negative");
    propulsion.validate();
    spectral_factor(*this);
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double channel_gain_to_bs(Vec2 uav_xy, const SystemParams& params) {
    const double dh = params.uav_altitude_m - params.bs_antenna_height_m;
    return params.ref_channel_gain / (dh * dh + uav_xy.squared_norm());
}

double spectral_factor(const SystemParams& params) {
    const double factor = std::exp2(params.packet_bits / params.bandwidth_hz) - 1.0;
    if (!std::isfinite(factor))
        throw NumericError("2^(packet_bits/bandwidth_hz) overflows double precision");
    return factor;
}

double device_tx_power(double dist_m, const SystemParams& params) {
    const double h = params.uav_altitude_m;
    return spectral_factor(params) * params.noise_power_w / params.ref_channel_gain *
           (dist_m * dist_m + h * h);
}

double induced_velocity_factor(double speed_mps, double mean_induced_velocity_mps) {
    const double s0 = mean_induced_velocity_mps;
    const double a = speed_mps * speed_mps / (2.0 * s0 * s0);
    const double root = std::hypot(1.0, a);
    if (a > 1.0) return std::sqrt(1.0 / (root + a));
    return std::sqrt(root - a);
}

double propulsion_power(double speed_mps, const PropulsionParams& pp) {
    const double v = speed_mps;
    const double v2 = v * v;
    const double blade = pp.blade_profile_power_w * (1.0 + 3.0 * v2 / (pp.tip_speed_mps * pp.tip_speed_mps));
    const double induced = pp.induced_power_w * induced_velocity_factor(v, pp.mean_induced_velocity_mps);
    const double parasite =
        0.5 * pp.fuselage_drag_ratio * pp.air_density * pp.rotor_solidity * pp.rotor_disk_area * v2 * v;
    return blade + induced + parasite;
}

EnergyQuanta flight_energy_quanta(double speed_mps, const SystemParams& params) {
    return {params.quanta_per_joule() * propulsion_power(speed_mps, params.propulsion) *
            params.slot_duration_s()};
}

EnergyQuanta relay_energy_quanta(Vec2 uav_xy, const SystemParams& params) {
    const double joules = params.noise_power_w / channel_gain_to_bs(uav_xy, params) * spectral_factor(params);
    return {params.quanta_per_joule() * joules};
}

int battery_step(int battery, bool scheduled, EnergyQuanta relay, EnergyQuanta flight) {
    const double consumed = scheduled ? relay.value + flight.value : flight.value;
    return battery - static_cast<int>(std::ceil(consumed));
}

std::vector<int> aoi_step(std::span<const int> aoi, std::span<const int> served, int max_age) {
    std::vector<int> next(aoi.size());
    std::transform(aoi.begin(), aoi.end(), next.begin(), [max_age](int a) { return std::min(max_age, a + 1); });
    for (int l : served) next.at(static_cast<std::size_t>(l)) = 1;
    return next;
}

} // namespace uavaoi
