#include "uavaoi/environment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "uavaoi/errors.hpp"

namespace uavaoi {

std::string_view to_string(Move m) {
    switch (m) {
    case Move::North: return "N";
    case Move::South: return "S";
    case Move::East: return "E";
    case Move::West: return "W";
    case Move::Hover: return "H";
    }
    return "?";
}

void GridSpec::validate() const {
    if (cells_per_side < 1 || cells_per_side % 2 == 0)
        throw ConfigError("grid cells_per_side must be a positive odd integer");
    if (!(cell_size_m > 0.0) || !std::isfinite(cell_size_m)) throw ConfigError("grid cell_size_m must be positive");
}

bool GridSpec::contains(Cell c) const {
    const int h = half();
    return c.x >= -h && c.x <= h && c.y >= -h && c.y <= h;
}

Cell GridSpec::nearest_cell(Vec2 p) const {
    const int h = half();
    auto snap = [&](double v) { return std::clamp(static_cast<int>(std::lround(v / cell_size_m)), -h, h); };
    return {snap(p.x), snap(p.y)};
}

Cell GridSpec::depot(int d) const {
    const int h = half();
    switch (d) {
    case 0: return {-h, -h};
    case 1: return {h, -h};
    case 2: return {h, h};
    case 3: return {-h, h};
    default: throw ContractError("depot index must be in [0, 4)");
    }
}

std::array<Cell, 4> GridSpec::depots() const { return {depot(0), depot(1), depot(2), depot(3)}; }

double GridSpec::half_extent_m() const { return std::max(1, half()) * cell_size_m; }

MoveResult apply_move(Cell cell, Move move, const GridSpec& grid) {
    Cell next = cell;
    switch (move) {
    case Move::North: ++next.y; break;
    case Move::South: --next.y; break;
    case Move::East: ++next.x; break;
    case Move::West: --next.x; break;
    case Move::Hover: return {cell, false};
    }
    if (!grid.contains(next)) return {cell, true};
    return {next, false};
}

Environment::Environment(GridSpec grid, std::vector<Device> devices, ClusterAssignment assignment,
                         SystemParams params, EnvOptions options)
    : grid_(grid), devices_(std::move(devices)), assignment_(std::move(assignment)), params_(params),
      options_(options) {
    grid_.validate();
    params_.validate();
    if (options_.uav_count < 1) throw ConfigError("at least one UAV is required");
    if (options_.uav_count > 4) throw ConfigError("at most 4 UAVs: each needs its own corner depot");
    if (options_.max_slots < 1) throw ConfigError("max_slots must be >= 1");
    if (devices_.empty()) throw ConfigError("at least one device is required");
    if (assignment_.cluster_count() < 1 ||
        assignment_.members.size() != assignment_.centroids.size())
        throw ConfigError("cluster assignment is malformed");

    std::map<int, int> index_of;
    for (std::size_t i = 0; i < devices_.size(); ++i) {
        if (!index_of.emplace(devices_[i].id, static_cast<int>(i)).second)
            throw ConfigError("duplicate device id " + std::to_string(devices_[i].id));
        if (!(devices_[i].weight >= 0.0)) throw ConfigError("device weights must be non-negative");
    }
    std::vector<char> seen(devices_.size(), 0);
    cluster_devices_.resize(assignment_.members.size());
    cluster_weight_.assign(assignment_.members.size(), 0.0);
    for (std::size_t l = 0; l < assignment_.members.size(); ++l) {
        if (static_cast<int>(assignment_.members[l].size()) > assignment_.capacity)
            throw ConfigError("cluster " + std::to_string(l + 1) + " exceeds capacity");
        for (int id : assignment_.members[l]) {
            auto it = index_of.find(id);
            if (it == index_of.end()) throw ConfigError("cluster member " + std::to_string(id) + " is not a device");
            if (seen[static_cast<std::size_t>(it->second)]++)
                throw ConfigError("device " + std::to_string(id) + " is in more than one cluster");
            cluster_devices_[l].push_back(it->second);
            cluster_weight_[l] += devices_[static_cast<std::size_t>(it->second)].weight;
        }
    }
    if (std::find(seen.begin(), seen.end(), 0) != seen.end())
        throw ConfigError("every device must belong to a cluster");

    hover_quanta_ = flight_energy_quanta(0.0, params_);
    move_quanta_ = flight_energy_quanta(params_.cruise_speed_mps, params_);
    const double edge = grid_.half() * grid_.cell_size_m;
    relay_max_ = relay_energy_quanta({edge, edge}, params_);

    const double per_uav = static_cast<double>(kMoveCount) * (cluster_count() + 1);
    const double total = std::pow(per_uav, options_.uav_count);
    if (total > static_cast<double>(std::numeric_limits<int>::max()))
        throw ConfigError("joint action space is too large to index");
    action_count_ = static_cast<int>(std::lround(total));
}

int Environment::nearest_depot_distance(Cell c) const {
    int best = std::numeric_limits<int>::max();
    for (Cell d : grid_.depots()) best = std::min(best, manhattan(c, d));
    return best;
}

int Environment::compute_beta(const UavState& uav) const {
    const int hops = nearest_depot_distance(uav.cell);
    const double reserve = hops * (move_quanta_.value + relay_max_.value);
    return uav.battery - static_cast<int>(std::ceil(reserve));
}

EnvState Environment::reset() const {
    EnvState s;
    s.uavs.resize(static_cast<std::size_t>(uav_count()));
    for (int u = 0; u < uav_count(); ++u) {
        auto& uav = s.uavs[static_cast<std::size_t>(u)];
        uav.home_depot = u % 4;
        uav.cell = grid_.depot(uav.home_depot);
        uav.battery = params_.battery_quanta;
    }
    s.aoi.assign(static_cast<std::size_t>(cluster_count()), 1);
    for (const auto& uav : s.uavs) s.beta.push_back(compute_beta(uav));
    s.t = 0;
    s.done = false;
    return s;
}

StepOutcome Environment::step(const EnvState& state, const JointAction& action) const {
    if (state.done) throw ContractError("step called on a finished episode");
    const auto n_uav = static_cast<std::size_t>(uav_count());
    if (action.uavs.size() != n_uav || state.uavs.size() != n_uav)
        throw ContractError("action/state UAV count does not match the environment");

    StepOutcome out;
    StepInfo& info = out.info;
    info.effective_schedule.assign(n_uav, 0);
    info.clamped.assign(n_uav, 0);
    info.consumption.assign(n_uav, 0.0);
    info.energy_spent.assign(n_uav, 0);

    // Lowest-index UAV wins a contested cluster.
    std::vector<char> taken(static_cast<std::size_t>(cluster_count()), 0);
    for (std::size_t u = 0; u < n_uav; ++u) {
        const int sched = action.uavs[u].schedule;
        if (sched < 0 || sched > cluster_count()) throw ContractError("schedule index out of range");
        if (sched == 0) continue;
        auto& flag = taken[static_cast<std::size_t>(sched - 1)];
        if (flag) continue;
        flag = 1;
        info.effective_schedule[u] = sched;
        info.served_clusters.push_back(sched - 1);
    }
    std::sort(info.served_clusters.begin(), info.served_clusters.end());

    // Uplink at the grant position, i.e. where the UAV is at slot start.
    for (std::size_t u = 0; u < n_uav; ++u) {
        const Vec2 pos = grid_.center(state.uavs[u].cell);
        info.uav_positions.push_back(pos);
        const int sched = info.effective_schedule[u];
        if (sched == 0) continue;
        for (int k : cluster_devices_[static_cast<std::size_t>(sched - 1)])
            info.device_power_sum_w += device_tx_power(distance(pos, devices_[static_cast<std::size_t>(k)].xy), params_);
    }

    EnvState& next = out.next_state;
    next.uavs = state.uavs;
    for (std::size_t u = 0; u < n_uav; ++u) {
        auto& uav = next.uavs[u];
        const MoveResult moved = apply_move(uav.cell, action.uavs[u].move, grid_);
        info.clamped[u] = moved.clamped ? 1 : 0;
        const bool hovering = action.uavs[u].move == Move::Hover || moved.clamped;
        const EnergyQuanta flight = hovering ? hover_quanta_ : move_quanta_;
        const int sched = info.effective_schedule[u];
        EnergyQuanta relay{};
        if (sched != 0) {
            relay = relay_energy_quanta(info.uav_positions[u], params_);
            if (options_.relay_per_device)
                relay = static_cast<double>(cluster_devices_[static_cast<std::size_t>(sched - 1)].size()) * relay;
        }
        const int before = uav.battery;
        uav.battery = battery_step(before, sched != 0, relay, flight);
        uav.cell = moved.cell;
        info.consumption[u] = sched != 0 ? relay.value + flight.value : flight.value;
        info.energy_spent[u] = before - uav.battery;
    }

    next.aoi = aoi_step(state.aoi, info.served_clusters, params_.max_age);
    double age_sum = 0.0;
    for (std::size_t l = 0; l < next.aoi.size(); ++l) {
        info.weighted_age += cluster_weight_[l] * next.aoi[l];
        age_sum += static_cast<double>(cluster_devices_[l].size()) * next.aoi[l];
    }
    info.mean_age = age_sum / device_count();

    const double power_term = params_.tradeoff_lambda / device_count() *
                              (info.device_power_sum_w / params_.reward_power_unit_w);
    out.reward = -info.weighted_age - power_term;
    if (!std::isfinite(out.reward)) throw NumericError("non-finite reward");

    for (const auto& uav : next.uavs) next.beta.push_back(compute_beta(uav));
    next.t = state.t + 1;
    const int min_beta = *std::min_element(next.beta.begin(), next.beta.end());
    next.done = min_beta <= 0 || next.t >= options_.max_slots;
    out.done = next.done;
    return out;
}

std::vector<double> Environment::encode_state(const EnvState& state) const {
    std::vector<double> x;
    x.reserve(static_cast<std::size_t>(state_size()));
    const double extent = grid_.half_extent_m();
    for (const auto& uav : state.uavs) {
        const Vec2 p = grid_.center(uav.cell);
        x.push_back(p.x / extent);
        x.push_back(p.y / extent);
    }
    for (int a : state.aoi) x.push_back(static_cast<double>(a) / params_.max_age);
    for (int b : state.beta) x.push_back(static_cast<double>(b) / params_.battery_quanta);
    return x;
}

int Environment::action_index(const JointAction& action) const {
    if (action.uavs.size() != static_cast<std::size_t>(uav_count()))
        throw ContractError("joint action has the wrong UAV count");
    const int base = kMoveCount * (cluster_count() + 1);
    int index = 0;
    int scale = 1;
    for (const auto& a : action.uavs) {
        const int m = static_cast<int>(a.move);
        if (m < 0 || m >= kMoveCount || a.schedule < 0 || a.schedule > cluster_count())
            throw ContractError("joint action component out of range");
        index += scale * (m * (cluster_count() + 1) + a.schedule);
        scale *= base;
    }
    return index;
}

JointAction Environment::action_decode(int index) const {
    if (index < 0 || index >= action_count_) throw ContractError("action index out of range");
    const int base = kMoveCount * (cluster_count() + 1);
    JointAction a;
    a.uavs.resize(static_cast<std::size_t>(uav_count()));
    for (auto& ua : a.uavs) {
        const int local = index % base;
        index /= base;
        ua.move = static_cast<Move>(local / (cluster_count() + 1));
        ua.schedule = local % (cluster_count() + 1);
    }
    return a;
}

} // namespace uavaoi
