#include "uavaoi/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include "uavaoi/errors.hpp"

namespace uavaoi {

using nlohmann::json;

void ExperimentConfig::validate() const {
    grid.validate();
    if (devices < 1) throw ConfigError("devices must be >= 1");
    if (uavs < 1 || uavs > 4) throw ConfigError("uavs must be in [1, 4] (one corner depot each)");
    if (lambdas.empty()) throw ConfigError("lambdas must list at least one value");
    for (double l : lambdas)
        if (!std::isfinite(l) || l < 0.0) throw ConfigError("lambda values must be finite and non-negative");
    if (importance != "uniform" && importance != "random")
        throw ConfigError("importance must be \"uniform\" or \"random\"");
    if (!(physics.cluster_rate_bps > 0.0)) throw ConfigError("physics.cluster_rate_bps is required and must be positive");
    if (eval_episodes < 1) throw ConfigError("eval_episodes must be >= 1");
    if (max_slots < 1) throw ConfigError("max_slots must be >= 1");
    if (kmeans.max_iter < 1 || kmeans.restarts < 1) throw ConfigError("kmeans.max_iter and kmeans.restarts must be >= 1");
    dqn.validate();
    for (double l : lambdas) system_params(l).validate();
    cluster_capacity(system_params(lambdas.front()));
}

SystemParams ExperimentConfig::system_params(double lambda) const {
    SystemParams p;
    p.ref_channel_gain = db_to_linear(physics.ref_gain_db);
    p.uav_altitude_m = physics.uav_altitude_m;
    p.bs_antenna_height_m = physics.bs_antenna_height_m;
    p.bandwidth_hz = physics.bandwidth_hz;
    p.packet_bits = physics.packet_bits;
    p.noise_power_w = dbm_to_watts(physics.noise_dbm);
    p.battery_capacity_j = physics.battery_capacity_j;
    p.battery_quanta = physics.battery_quanta;
    p.cell_size_m = grid.cell_size_m;
    p.cruise_speed_mps = physics.cruise_speed_mps;
    p.max_age = physics.max_age;
    p.propulsion = physics.propulsion;
    p.tradeoff_lambda = lambda;
    p.cluster_rate_bps = physics.cluster_rate_bps;
    p.reward_power_unit_w = physics.reward_power_unit_w;
    return p;
}

EnvOptions ExperimentConfig::env_options() const {
    return {.uav_count = uavs, .max_slots = max_slots, .relay_per_device = physics.relay_per_device};
}

json to_json(const ExperimentConfig& c) {
    const auto& p = c.physics;
    const auto& pp = p.propulsion;
    return json{
        {"grid", {{"cells_per_side", c.grid.cells_per_side}, {"cell_size_m", c.grid.cell_size_m}}},
        {"devices", c.devices},
        {"uavs", c.uavs},
        {"physics",
         {{"battery_capacity_j", p.battery_capacity_j},
          {"battery_quanta", p.battery_quanta},
          {"max_age", p.max_age},
          {"ref_gain_db", p.ref_gain_db},
          {"uav_altitude_m", p.uav_altitude_m},
          {"bs_antenna_height_m", p.bs_antenna_height_m},
          {"bandwidth_hz", p.bandwidth_hz},
          {"packet_bits", p.packet_bits},
          {"noise_dbm", p.noise_dbm},
          {"cruise_speed_mps", p.cruise_speed_mps},
          {"cluster_rate_bps", p.cluster_rate_bps},
          {"reward_power_unit_w", p.reward_power_unit_w},
          {"relay_per_device", p.relay_per_device},
          {"propulsion",
           {{"blade_profile_power_w", pp.blade_profile_power_w},
            {"induced_power_w", pp.induced_power_w},
            {"tip_speed_mps", pp.tip_speed_mps},
            {"mean_induced_velocity_mps", pp.mean_induced_velocity_mps},
            {"fuselage_drag_ratio", pp.fuselage_drag_ratio},
            {"air_density", pp.air_density},
            {"rotor_solidity", pp.rotor_solidity},
            {"rotor_disk_area", pp.rotor_disk_area}}}}},
        {"lambdas", c.lambdas},
        {"importance", c.importance},
        {"dqn",
         {{"gamma", c.dqn.gamma},
          {"lr", c.dqn.lr},
          {"batch_size", c.dqn.batch_size},
          {"target_sync", c.dqn.target_sync},
          {"warmup", c.dqn.warmup},
          {"buffer_capacity", c.dqn.buffer_capacity},
          {"hidden", c.dqn.hidden},
          {"episodes", c.dqn.episodes},
          {"epsilon",
           {{"start", c.dqn.epsilon.start},
            {"floor", c.dqn.epsilon.floor},
            {"decay_fraction", c.dqn.epsilon.decay_fraction}}},
          {"huber", c.dqn.loss.huber},
          {"huber_delta", c.dqn.loss.huber_delta},
          {"max_grad_norm", c.dqn.loss.max_grad_norm}}},
        {"kmeans", {{"max_iter", c.kmeans.max_iter}, {"restarts", c.kmeans.restarts}}},
        {"seeds", {{"scenario", c.seeds.scenario}, {"training", c.seeds.training}, {"evaluation", c.seeds.evaluation}}},
        {"eval_episodes", c.eval_episodes},
        {"max_slots", c.max_slots},
        {"output_dir", c.output_dir},
    };
}

namespace {

/// Reads known keys of one JSON object and rejects the rest.
class Section {
public:
    Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ConfigError(where() + " must be an object");
    }

    template <class T>
    Section& read(const char* key, T& out) {
        seen_.insert(key);
        auto it = j_.find(key);
        if (it == j_.end()) return *this;
        try {
            out = it->template get<T>();
        } catch (const json::exception&) {
            throw ConfigError(path_ + "." + key + " has the wrong type");
        }
        return *this;
    }

    bool has(const char* key) const { return j_.contains(key); }

    Section child(const char* key) {
        seen_.insert(key);
        static const json empty = json::object();
        auto it = j_.find(key);
        return Section(it == j_.end() ? empty : *it, path_ + "." + key);
    }

    void finish() const {
        for (const auto& item : j_.items())
            if (!seen_.contains(item.key())) throw ConfigError("unknown config key " + path_ + "." + item.key());
    }

private:
    std::string where() const { return path_.empty() ? "config" : path_; }

    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

} // namespace

ExperimentConfig config_from_json(const json& j) {
    ExperimentConfig c;
    Section root(j, "config");
    {
        Section g = root.child("grid");
        g.read("cells_per_side", c.grid.cells_per_side).read("cell_size_m", c.grid.cell_size_m).finish();
    }
    root.read("devices", c.devices).read("uavs", c.uavs);
    {
        Section p = root.child("physics");
        auto& ph = c.physics;
        if (!p.has("cluster_rate_bps")) throw ConfigError("physics.cluster_rate_bps is required");
        p.read("battery_capacity_j", ph.battery_capacity_j)
            .read("battery_quanta", ph.battery_quanta)
            .read("max_age", ph.max_age)
            .read("ref_gain_db", ph.ref_gain_db)
            .read("uav_altitude_m", ph.uav_altitude_m)
            .read("bs_antenna_height_m", ph.bs_antenna_height_m)
            .read("bandwidth_hz", ph.bandwidth_hz)
            .read("packet_bits", ph.packet_bits)
            .read("noise_dbm", ph.noise_dbm)
            .read("cruise_speed_mps", ph.cruise_speed_mps)
            .read("cluster_rate_bps", ph.cluster_rate_bps)
            .read("reward_power_unit_w", ph.reward_power_unit_w)
            .read("relay_per_device", ph.relay_per_device);
        Section pr = p.child("propulsion");
        auto& pp = ph.propulsion;
        pr.read("blade_profile_power_w", pp.blade_profile_power_w)
            .read("induced_power_w", pp.induced_power_w)
            .read("tip_speed_mps", pp.tip_speed_mps)
            .read("mean_induced_velocity_mps", pp.mean_induced_velocity_mps)
            .read("fuselage_drag_ratio", pp.fuselage_drag_ratio)
            .read("air_density", pp.air_density)
            .read("rotor_solidity", pp.rotor_solidity)
            .read("rotor_disk_area", pp.rotor_disk_area)
            .finish();
        p.finish();
    }
    root.read("lambdas", c.lambdas).read("importance", c.importance);
    {
        Section d = root.child("dqn");
        d.read("gamma", c.dqn.gamma)
            .read("lr", c.dqn.lr)
            .read("batch_size", c.dqn.batch_size)
            .read("target_sync", c.dqn.target_sync)
            .read("warmup", c.dqn.warmup)
            .read("buffer_capacity", c.dqn.buffer_capacity)
            .read("hidden", c.dqn.hidden)
            .read("episodes", c.dqn.episodes)
            .read("huber", c.dqn.loss.huber)
            .read("huber_delta", c.dqn.loss.huber_delta)
            .read("max_grad_norm", c.dqn.loss.max_grad_norm);
        Section e = d.child("epsilon");
        e.read("start", c.dqn.epsilon.start)
            .read("floor", c.dqn.epsilon.floor)
            .read("decay_fraction", c.dqn.epsilon.decay_fraction)
            .finish();
        d.finish();
    }
    {
        Section k = root.child("kmeans");
        k.read("max_iter", c.kmeans.max_iter).read("restarts", c.kmeans.restarts).finish();
    }
    {
        Section s = root.child("seeds");
        s.read("scenario", c.seeds.scenario).read("training", c.seeds.training).read("evaluation", c.seeds.evaluation).finish();
    }
    root.read("eval_episodes", c.eval_episodes).read("max_slots", c.max_slots).read("output_dir", c.output_dir);
    root.finish();
    c.validate();
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open config " + path.string());
    json j;
    try {
        j = json::parse(is, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::exception& e) {
        throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
    }
    return config_from_json(j);
}

ExperimentConfig desk_profile() {
    ExperimentConfig c;
    c.grid = {.cells_per_side = 5, .cell_size_m = 100.0};
    c.devices = 20;
    c.uavs = 1;
    // floor(6.25e6 * 100 / (5e6 * 25)) = 5 devices per cluster -> 4 clusters.
    c.physics.cluster_rate_bps = 6.25e6;
    c.lambdas = {0.0};
    c.dqn.episodes = 3000;
    c.max_slots = 60;
    c.eval_episodes = 50;
    c.output_dir = "runs/desk";
    return c;
}

std::string config_hash(const ExperimentConfig& cfg) {
    nlohmann::json j = to_json(cfg);
    j.erase("output_dir");
    const std::string text = j.dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace uavaoi
