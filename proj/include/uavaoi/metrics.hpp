#pragma once

#include <span>
#include <vector>

#include "uavaoi/environment.hpp"

namespace uavaoi {

/// Per-episode aggregates. Ages are post-step A_k(t+1), averaged over slots.
struct EpisodeMetrics {
    int episode = 0;
    double accumulative_reward = 0.0;
    int length = 0;
    double mean_age = 0.0;           ///< mean over slots and devices
    double mean_weighted_age = 0.0;  ///< mean over slots of sum_k delta_k A_k
    double mean_power_w = 0.0;       ///< mean over slots of (1/K) sum_k P_k
    double sum_weighted_age = 0.0;   ///< raw sums, used to re-score the episode at another lambda
    double sum_power_w = 0.0;
    std::vector<int> energy_per_uav;  ///< quanta spent

    /// Accumulative reward the same trajectory would earn at `lambda`.
    double rescored_reward(double lambda, int device_count, double power_unit_w) const;
};

class EpisodeAccumulator {
public:
    explicit EpisodeAccumulator(int uav_count, int device_count)
        : device_count_(device_count), energy_(static_cast<std::size_t>(uav_count), 0) {}

    void add(const StepOutcome& outcome);
    EpisodeMetrics finish(int episode) const;
    int length() const { return length_; }

private:
    int device_count_;
    int length_ = 0;
    double reward_ = 0.0;
    double age_sum_ = 0.0;
    double weighted_age_sum_ = 0.0;
    double power_mean_sum_ = 0.0;
    double power_sum_ = 0.0;
    std::vector<int> energy_;
};

struct MeanCi {
    double mean = 0.0;
    double half_width = 0.0;  ///< 95 % Student-t half width; 0 for n < 2

    double lower() const { return mean - half_width; }
    double upper() const { return mean + half_width; }
};

MeanCi mean_ci95(std::span<const double> values);

/// Time-and-ensemble averages over a set of episodes: each episode's slot
/// average, then the mean across episodes.
struct ErgodicSummary {
    int episodes = 0;
    MeanCi age;
    MeanCi weighted_age;
    MeanCi power_w;
    MeanCi accumulative_reward;
    double mean_length = 0.0;
};

ErgodicSummary summarize(std::span<const EpisodeMetrics> episodes);

} // namespace uavaoi
