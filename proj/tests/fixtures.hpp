#pragma once

#include <vector>

#include "uavaoi/config.hpp"
#include "uavaoi/environment.hpp"
#include "uavaoi/scenario.hpp"

namespace fixture {

/// One device per cluster, placed at the given points; uniform weights.
inline uavaoi::Environment singleton_clusters(const std::vector<uavaoi::Vec2>& points, int uavs = 1,
                                              int cells_per_side = 5, double lambda = 0.0, int max_slots = 200) {
    using namespace uavaoi;
    std::vector<Device> devices;
    ClusterAssignment a;
    a.capacity = 1;
    const int k = static_cast<int>(points.size());
    for (int i = 0; i < k; ++i) {
        devices.push_back({i, points[static_cast<std::size_t>(i)], 1.0 / k});
        a.centroids.push_back(points[static_cast<std::size_t>(i)]);
        a.members.push_back({i});
    }
    SystemParams p;
    p.tradeoff_lambda = lambda;
    return Environment(GridSpec{cells_per_side, 100.0}, devices, a, p, EnvOptions{uavs, max_slots, false});
}

/// Config-driven scenario on a grid, as the harness builds it.
inline uavaoi::ExperimentConfig small_config(int side, int devices, int uavs, double rate_bps, int max_slots = 200) {
    uavaoi::ExperimentConfig cfg = uavaoi::desk_profile();
    cfg.grid.cells_per_side = side;
    cfg.devices = devices;
    cfg.uavs = uavs;
    cfg.physics.cluster_rate_bps = rate_bps;
    cfg.max_slots = max_slots;
    cfg.kmeans.restarts = 2;
    return cfg;
}

} // namespace fixture
