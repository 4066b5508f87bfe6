#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "uavaoi/environment.hpp"
#include "uavaoi/metrics.hpp"
#include "uavaoi/neural.hpp"
#include "uavaoi/policies.hpp"
#include "uavaoi/replay_buffer.hpp"
#include "uavaoi/trajectory_log.hpp"

namespace uavaoi {

struct DqnConfig {
    double gamma = 0.99;
    double lr = 1e-4;
    int batch_size = 64;
    int target_sync = 1000;  ///< training steps between target-network copies
    int warmup = 1000;       ///< transitions collected before the first gradient step
    int buffer_capacity = 100000;
    std::vector<int> hidden = {64, 128, 256, 128, 128};
    EpsilonSchedule epsilon;
    int episodes = 3000;
    LossOptions loss;

    void validate() const;
};

struct TrainResult {
    Mlp net;
    AdamState adam;
    std::vector<EpisodeMetrics> episodes;
    std::int64_t train_steps = 0;
    std::int64_t target_syncs = 0;
};

/// Deep Q-learning over the joint action space: epsilon-greedy acting,
/// uniform replay, periodic target-network synchronisation.
class DqnTrainer {
public:
    DqnTrainer(const Environment& env, DqnConfig config, std::uint64_t seed);

    /// One training episode; epsilon follows the schedule at `episode` of config.episodes.
    EpisodeMetrics run_episode(int episode);

    using Progress = std::function<void(const EpisodeMetrics&)>;
    TrainResult train(const Progress& progress = {});

    const Mlp& online() const { return online_; }
    const Mlp& target() const { return target_; }
    const AdamState& adam() const { return adam_; }
    const ReplayBuffer& buffer() const { return buffer_; }
    std::int64_t train_steps() const { return train_steps_; }
    double last_loss() const { return last_loss_; }

private:
    const Environment& env_;
    DqnConfig config_;
    Mlp online_;
    Mlp target_;
    AdamState adam_;
    ReplayBuffer buffer_;
    Rng explore_rng_;
    Rng sample_rng_;
    std::int64_t train_steps_ = 0;
    std::int64_t target_syncs_ = 0;
    double last_loss_ = 0.0;
};

TrainResult train_dqn(const Environment& env, const DqnConfig& config, std::uint64_t seed,
                      const DqnTrainer::Progress& progress = {});

/// Play one episode with `policy`; when `log` is given every slot is appended to it.
EpisodeMetrics run_episode(Policy& policy, const Environment& env, int episode,
                           std::vector<TrajectoryRecord>* log = nullptr);

} // namespace uavaoi
