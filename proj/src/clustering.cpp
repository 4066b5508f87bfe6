#include "uavaoi/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <tuple>

#include "uavaoi/errors.hpp"

namespace uavaoi {

int cluster_capacity(const SystemParams& params) {
    if (!(params.cluster_rate_bps > 0.0 && params.cell_size_m > 0.0 && params.packet_bits > 0.0 &&
          params.cruise_speed_mps > 0.0))
        throw ConfigError("cluster capacity needs positive rate, cell size, packet size and speed");
    const double ratio =
        params.cluster_rate_bps * params.cell_size_m / (params.packet_bits * params.cruise_speed_mps);
    // Absorb one-ulp rounding so that exact integer ratios are not floored down.
    const double n = std::floor(ratio * (1.0 + 1e-12));
    if (n < 1.0)
        throw ConfigError("infeasible rate: a device cannot deliver one packet within a slot (R_b*d_g/(M*v) = " +
                          std::to_string(ratio) + ")");
    if (n > static_cast<double>(std::numeric_limits<int>::max())) return std::numeric_limits<int>::max();
    return static_cast<int>(n);
}

namespace {

using Labels = std::vector<int>;

std::vector<Vec2> seed_plus_plus(std::span<const Device> devices, int k, std::mt19937_64& rng) {
    const std::size_t n = devices.size();
    std::vector<Vec2> centroids;
    centroids.reserve(static_cast<std::size_t>(k));
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    centroids.push_back(devices[pick(rng)].xy);

    std::vector<double> d2(n, std::numeric_limits<double>::infinity());
    while (static_cast<int>(centroids.size()) < k) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            d2[i] = std::min(d2[i], squared_distance(devices[i].xy, centroids.back()));
            total += d2[i];
        }
        std::size_t chosen = 0;
        if (total > 0.0) {
            double target = std::uniform_real_distribution<double>(0.0, total)(rng);
            chosen = n - 1;
            for (std::size_t i = 0; i < n; ++i) {
                target -= d2[i];
                if (target < 0.0) {
                    chosen = i;
                    break;
                }
            }
        } else {
            chosen = pick(rng);
        }
        centroids.push_back(devices[chosen].xy);
    }
    return centroids;
}

Labels assign_greedy(std::span<const Device> devices, std::span<const Vec2> centroids, int capacity) {
    const int n = static_cast<int>(devices.size());
    const int k = static_cast<int>(centroids.size());
    std::vector<std::tuple<double, int, int>> pairs;
    pairs.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(k));
    for (int i = 0; i < n; ++i)
        for (int c = 0; c < k; ++c)
            pairs.emplace_back(squared_distance(devices[static_cast<std::size_t>(i)].xy,
                                                centroids[static_cast<std::size_t>(c)]),
                               i, c);
    std::sort(pairs.begin(), pairs.end());

    Labels labels(static_cast<std::size_t>(n), -1);
    std::vector<int> load(static_cast<std::size_t>(k), 0);
    int placed = 0;
    for (const auto& [d2, i, c] : pairs) {
        auto& label = labels[static_cast<std::size_t>(i)];
        if (label >= 0 || load[static_cast<std::size_t>(c)] >= capacity) continue;
        label = c;
        ++load[static_cast<std::size_t>(c)];
        if (++placed == n) break;
    }
    return labels;
}

std::vector<Vec2> member_means(std::span<const Device> devices, const Labels& labels, std::vector<Vec2> centroids) {
    std::vector<Vec2> sum(centroids.size());
    std::vector<int> count(centroids.size(), 0);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const auto c = static_cast<std::size_t>(labels[i]);
        sum[c] = sum[c] + devices[i].xy;
        ++count[c];
    }
    for (std::size_t c = 0; c < centroids.size(); ++c)
        if (count[c] > 0) centroids[c] = (1.0 / count[c]) * sum[c];
    return centroids;
}

double labelled_cost(std::span<const Device> devices, const Labels& labels, std::span<const Vec2> centroids) {
    double cost = 0.0;
    for (std::size_t i = 0; i < labels.size(); ++i)
        cost += squared_distance(devices[i].xy, centroids[static_cast<std::size_t>(labels[i])]);
    return cost;
}

struct RunResult {
    Labels labels;
    std::vector<Vec2> centroids;
    double cost = 0.0;
};

RunResult single_run(std::span<const Device> devices, int k, int capacity, int max_iter, std::mt19937_64& rng) {
    std::vector<Vec2> centroids = seed_plus_plus(devices, k, rng);
    Labels labels;
    Labels previous;
    for (int iter = 0; iter < std::max(1, max_iter); ++iter) {
        labels = assign_greedy(devices, centroids, capacity);

        std::vector<int> load(static_cast<std::size_t>(k), 0);
        for (int c : labels) ++load[static_cast<std::size_t>(c)];
        std::vector<char> used(devices.size(), 0);
        bool repaired = false;
        for (int c = 0; c < k; ++c) {
            if (load[static_cast<std::size_t>(c)] > 0) continue;
            std::size_t far = devices.size();
            double far_d2 = -1.0;
            for (std::size_t i = 0; i < devices.size(); ++i) {
                if (used[i]) continue;
                const double d2 = squared_distance(devices[i].xy, centroids[static_cast<std::size_t>(labels[i])]);
                if (d2 > far_d2) {
                    far_d2 = d2;
                    far = i;
                }
            }
            if (far == devices.size()) break;
            used[far] = 1;
            centroids[static_cast<std::size_t>(c)] = devices[far].xy;
            repaired = true;
        }
        if (repaired) continue;
        if (labels == previous) break;
        centroids = member_means(devices, labels, std::move(centroids));
        previous = labels;
    }
    centroids = member_means(devices, labels, std::move(centroids));
    const double cost = labelled_cost(devices, labels, centroids);
    return {std::move(labels), std::move(centroids), cost};
}

} // namespace

ClusterAssignment kmeans_capacitated(std::span<const Device> devices, int capacity, std::uint64_t seed,
                                     const KMeansOptions& options) {
    if (devices.empty()) throw ConfigError("clustering needs at least one device");
    if (capacity < 1) throw ConfigError("cluster capacity must be >= 1");
    const int n = static_cast<int>(devices.size());
    const int k = (n + capacity - 1) / capacity;

    std::mt19937_64 rng(seed);
    RunResult best;
    best.cost = std::numeric_limits<double>::infinity();
    for (int r = 0; r < std::max(1, options.restarts); ++r) {
        RunResult run = single_run(devices, k, capacity, options.max_iter, rng);
        if (run.cost < best.cost) best = std::move(run);
    }

    ClusterAssignment out;
    out.capacity = capacity;
    out.centroids = std::move(best.centroids);
    out.members.resize(static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < best.labels.size(); ++i)
        out.members[static_cast<std::size_t>(best.labels[i])].push_back(devices[i].id);
    return out;
}

double within_cluster_cost(std::span<const Device> devices, const ClusterAssignment& assignment) {
    double cost = 0.0;
    for (const auto& members : assignment.members) {
        if (members.empty()) continue;
        Vec2 mean;
        std::vector<Vec2> pts;
        for (int id : members) {
            auto it = std::find_if(devices.begin(), devices.end(), [id](const Device& d) { return d.id == id; });
            if (it == devices.end()) throw ContractError("cluster member id not among devices");
            pts.push_back(it->xy);
            mean = mean + it->xy;
        }
        mean = (1.0 / static_cast<double>(pts.size())) * mean;
        for (Vec2 p : pts) cost += squared_distance(p, mean);
    }
    return cost;
}

} // namespace uavaoi
