#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "oracles.hpp"
#include "uavaoi/clustering.hpp"
#include "uavaoi/errors.hpp"

using namespace uavaoi;

namespace {

std::vector<Device> random_devices(int k, std::uint64_t seed, double half = 550.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-half, half);
    std::vector<Device> out;
    for (int i = 0; i < k; ++i) out.push_back({i, {u(rng), u(rng)}, 1.0 / k});
    return out;
}

void expect_partition(const ClusterAssignment& a, int k, int capacity) {
    std::multiset<int> seen;
    for (const auto& m : a.members) {
        EXPECT_LE(static_cast<int>(m.size()), capacity);
        seen.insert(m.begin(), m.end());
    }
    ASSERT_EQ(static_cast<int>(seen.size()), k);
    int expect = 0;
    for (int id : seen) EXPECT_EQ(id, expect++);
    EXPECT_EQ(a.cluster_count(), (k + capacity - 1) / capacity);
}

} // namespace

TEST(Capacity, Examples) {
    SystemParams p;
    p.cluster_rate_bps = 25e6;
    EXPECT_EQ(cluster_capacity(p), 20);
    p.cluster_rate_bps = 5e6;
    EXPECT_EQ(cluster_capacity(p), 4);
    p.cluster_rate_bps = p.packet_bits * p.cruise_speed_mps / p.cell_size_m;
    EXPECT_EQ(cluster_capacity(p), 1);
    p.cluster_rate_bps = 6.25e6;
    EXPECT_EQ(cluster_capacity(p), 5);
}

TEST(Capacity, InfeasibleRate) {
    SystemParams p;
    p.cluster_rate_bps = 1e6;
    EXPECT_THROW(cluster_capacity(p), ConfigError);
}

TEST(KMeans, Singleton) {
    const std::vector<Device> d{{0, {12.5, -3.0}, 1.0}};
    const auto a = kmeans_capacitated(d, 1, 5);
    ASSERT_EQ(a.cluster_count(), 1);
    EXPECT_EQ(a.centroids[0].x, 12.5);
    EXPECT_EQ(a.centroids[0].y, -3.0);
    EXPECT_EQ(a.members[0], (std::vector<int>{0}));
}

TEST(KMeans, SquareCornersPairClosest) {
    // Rectangle 100 x 300: the short sides are the closest pairs
    const std::vector<Device> d{{0, {0, 0}, 0.25}, {1, {100, 0}, 0.25}, {2, {0, 300}, 0.25}, {3, {100, 300}, 0.25}};
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto a = kmeans_capacitated(d, 2, seed);
        expect_partition(a, 4, 2);
        EXPECT_DOUBLE_EQ(within_cluster_cost(d, a), oracle::exhaustive_min_sse(d, 2, 2));
        for (auto m : a.members) {
            std::sort(m.begin(), m.end());
            EXPECT_TRUE(m == std::vector<int>({0, 1}) || m == std::vector<int>({2, 3}));
        }
    }
}

TEST(KMeans, PartitionAndCapacityOnRandomInstances) {
    for (std::uint64_t s = 0; s < 20; ++s) {
        const auto d = random_devices(100, s);
        const auto a = kmeans_capacitated(d, 20, s);
        expect_partition(a, 100, 20);
        EXPECT_EQ(a.cluster_count(), 5);
    }
}

TEST(KMeans, NonDivisibleCount) {
    const auto d = random_devices(23, 9);
    const auto a = kmeans_capacitated(d, 5, 9);
    expect_partition(a, 23, 5);
    EXPECT_EQ(a.cluster_count(), 5);
}

TEST(KMeans, CoincidentDevices) {
    std::vector<Device> d;
    for (int i = 0; i < 12; ++i) d.push_back({i, {50.0, 50.0}, 1.0 / 12});
    const auto a = kmeans_capacitated(d, 4, 1);
    expect_partition(a, 12, 4);
    EXPECT_EQ(within_cluster_cost(d, a), 0.0);
}

TEST(KMeans, Deterministic) {
    const auto d = random_devices(60, 4);
    const auto a = kmeans_capacitated(d, 7, 42);
    const auto b = kmeans_capacitated(d, 7, 42);
    EXPECT_EQ(a.members, b.members);
    ASSERT_EQ(a.centroids.size(), b.centroids.size());
    for (std::size_t i = 0; i < a.centroids.size(); ++i) {
        EXPECT_EQ(a.centroids[i].x, b.centroids[i].x);
        EXPECT_EQ(a.centroids[i].y, b.centroids[i].y);
    }
}

TEST(KMeans, CentroidsAreMemberMeans) {
    const auto d = random_devices(40, 8);
    const auto a = kmeans_capacitated(d, 10, 8);
    for (int l = 0; l < a.cluster_count(); ++l) {
        double sx = 0, sy = 0;
        for (int id : a.members[static_cast<std::size_t>(l)]) sx += d[static_cast<std::size_t>(id)].xy.x, sy += d[static_cast<std::size_t>(id)].xy.y;
        const double n = static_cast<double>(a.members[static_cast<std::size_t>(l)].size());
        EXPECT_NEAR(a.centroids[static_cast<std::size_t>(l)].x, sx / n, 1e-9);
        EXPECT_NEAR(a.centroids[static_cast<std::size_t>(l)].y, sy / n, 1e-9);
    }
}

TEST(KMeans, NearExhaustiveOptimumOnSmallInstances) {
    std::mt19937_64 rng(2024);
    int within = 0;
    for (int trial = 0; trial < 40; ++trial) {
        const int k = 3 + static_cast<int>(rng() % 6);
        const int cap = 2 + static_cast<int>(rng() % 3);
        const auto d = random_devices(k, rng());
        const auto a = kmeans_capacitated(d, cap, rng());
        const double best = oracle::exhaustive_min_sse(d, (k + cap - 1) / cap, cap);
        if (within_cluster_cost(d, a) <= 1.25 * best + 1e-9) ++within;
    }
    EXPECT_GE(within, 36);
}

TEST(KMeans, RejectsBadInput) {
    const auto d = random_devices(5, 1);
    EXPECT_THROW(kmeans_capacitated(d, 0, 1), ConfigError);
    EXPECT_THROW(kmeans_capacitated(std::span<const Device>{}, 3, 1), ConfigError);
}
