#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

#include "uavaoi/clustering.hpp"
#include "uavaoi/geometry.hpp"
#include "uavaoi/physics.hpp"

namespace uavaoi {

enum class Move : int { North = 0, South = 1, East = 2, West = 3, Hover = 4 };
inline constexpr int kMoveCount = 5;

std::string_view to_string(Move m);

/// Square grid of odd side centred on the base station; depots at the corners.
struct GridSpec {
    int cells_per_side = 11;
    double cell_size_m = 100.0;

    void validate() const;
    int half() const { return (cells_per_side - 1) / 2; }
    bool contains(Cell c) const;
    Vec2 center(Cell c) const { return {c.x * cell_size_m, c.y * cell_size_m}; }
    /// Nearest cell centre, clamped to the grid.
    Cell nearest_cell(Vec2 p) const;
    /// Depot d in {0..3}: (-h,-h), (h,-h), (h,h), (-h,h).
    Cell depot(int d) const;
    std::array<Cell, 4> depots() const;
    /// Normaliser for positions: distance from the centre to the outermost cell centres.
    double half_extent_m() const;
};

struct MoveResult {
    Cell cell;
    bool clamped = false;  ///< the move would have left the grid and was executed as a hover
};

MoveResult apply_move(Cell cell, Move move, const GridSpec& grid);

struct UavState {
    Cell cell;
    int battery = 0;  ///< quanta
    int home_depot = 0;

    friend bool operator==(const UavState&, const UavState&) = default;
};

struct EnvState {
    std::vector<UavState> uavs;
    std::vector<int> aoi;   ///< per cluster, slots
    std::vector<int> beta;  ///< per UAV battery margin, quanta
    int t = 0;
    bool done = false;

    friend bool operator==(const EnvState&, const EnvState&) = default;
};

struct UavAction {
    Move move = Move::Hover;
    int schedule = 0;  ///< 0 = idle, l in 1..L serves cluster l

    friend bool operator==(const UavAction&, const UavAction&) = default;
};

struct JointAction {
    std::vector<UavAction> uavs;

    friend bool operator==(const JointAction&, const JointAction&) = default;
};

struct StepInfo {
    std::vector<int> served_clusters;    ///< 0-based cluster indices, ascending
    std::vector<int> effective_schedule; ///< per UAV after conflict resolution (0 = idle)
    std::vector<char> clamped;           ///< per UAV
    std::vector<Vec2> uav_positions;     ///< per UAV at slot start (uplink grant)
    double device_power_sum_w = 0.0;     ///< sum over devices of P_k(t)
    double weighted_age = 0.0;           ///< sum_k delta_k A_k(t+1)
    double mean_age = 0.0;               ///< (1/K) sum_k A_k(t+1)
    std::vector<double> consumption;     ///< per UAV, unquantised quanta this slot
    std::vector<int> energy_spent;       ///< per UAV, ceil(consumption)
};

struct StepOutcome {
    EnvState next_state;
    double reward = 0.0;
    bool done = false;
    StepInfo info;
};

struct EnvOptions {
    int uav_count = 1;
    int max_slots = 200;
    /// Charge relay energy once per served device instead of once per packet slot.
    bool relay_per_device = false;
};

/// Episodic grid-world MDP. The object is immutable after construction; the
/// episode state is passed in and out explicitly, so one instance can drive
/// any number of independent episodes.
class Environment {
public:
    Environment(GridSpec grid, std::vector<Device> devices, ClusterAssignment assignment, SystemParams params,
                EnvOptions options);

    EnvState reset() const;
    StepOutcome step(const EnvState& state, const JointAction& action) const;

    /// Battery minus the reserve needed to fly to the nearest depot while relaying every slot.
    int compute_beta(const UavState& uav) const;

    /// [x_u, y_u]*U normalised to [-1, 1], AoI_l / A_max for every cluster, beta_u / N_quanta.
    std::vector<double> encode_state(const EnvState& state) const;
    int state_size() const { return 3 * uav_count() + cluster_count(); }

    int action_count() const { return action_count_; }
    int action_index(const JointAction& action) const;
    JointAction action_decode(int index) const;

    int uav_count() const { return options_.uav_count; }
    int cluster_count() const { return assignment_.cluster_count(); }
    int device_count() const { return static_cast<int>(devices_.size()); }
    int nearest_depot_distance(Cell c) const;

    const GridSpec& grid() const { return grid_; }
    const SystemParams& params() const { return params_; }
    const EnvOptions& options() const { return options_; }
    const std::vector<Device>& devices() const { return devices_; }
    const ClusterAssignment& assignment() const { return assignment_; }
    /// Device indices (into devices()) per cluster.
    const std::vector<std::vector<int>>& cluster_device_indices() const { return cluster_devices_; }
    const std::vector<double>& cluster_weights() const { return cluster_weight_; }

    EnergyQuanta hover_quanta() const { return hover_quanta_; }
    EnergyQuanta move_quanta() const { return move_quanta_; }
    EnergyQuanta relay_reserve_quanta() const { return relay_max_; }

private:
    GridSpec grid_;
    std::vector<Device> devices_;
    ClusterAssignment assignment_;
    SystemParams params_;
    EnvOptions options_;

    std::vector<std::vector<int>> cluster_devices_;
    std::vector<double> cluster_weight_;
    EnergyQuanta hover_quanta_;
    EnergyQuanta move_quanta_;
    EnergyQuanta relay_max_;
    int action_count_ = 0;
};

} // namespace uavaoi
