#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "uavaoi/geometry.hpp"
#include "uavaoi/physics.hpp"

namespace uavaoi {

struct Device {
    int id = 0;
    Vec2 xy;
    double weight = 0.0;  ///< importance used in the age term of the reward
};

struct ClusterAssignment {
    int capacity = 0;
    std::vector<Vec2> centroids;
    std::vector<std::vector<int>> members;  ///< device ids per cluster

    int cluster_count() const { return static_cast<int>(centroids.size()); }
};

/// Devices a cluster may hold so that all members upload one packet within a
/// single slot: floor(R_b * d_g / (M * v)). Throws ConfigError when zero.
int cluster_capacity(const SystemParams& params);

struct KMeansOptions {
    int max_iter = 100;
    /// Independent k-means++ restarts; the lowest-cost result is kept.
    int restarts = 10;
};

/// Capacity-constrained k-means with ceil(K / capacity) clusters.
///
/// Each restart seeds centroids with k-means++, then alternates a greedy
/// assignment (device-centroid pairs in ascending distance order, each device
/// placed in the nearest cluster that still has room) with member-mean
/// centroid updates until the assignment is stable or `max_iter` is reached.
/// A cluster that comes out empty is re-seeded at the device farthest from
/// its own centroid. Deterministic for a fixed seed.
ClusterAssignment kmeans_capacitated(std::span<const Device> devices, int capacity, std::uint64_t seed,
                                     const KMeansOptions& options = {});

/// Within-cluster sum of squared distances to the member mean.
double within_cluster_cost(std::span<const Device> devices, const ClusterAssignment& assignment);

} // namespace uavaoi
