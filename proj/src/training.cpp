#include "uavaoi/training.hpp"

#include "uavaoi/errors.hpp"

namespace uavaoi {

void DqnConfig::validate() const {
    if (!(gamma >= 0.0 && gamma < 1.0)) throw ConfigError("dqn.gamma must be in [0, 1)");
    if (!(lr > 0.0)) throw ConfigError("dqn.lr must be positive");
    if (batch_size < 1) throw ConfigError("dqn.batch_size must be >= 1");
    if (target_sync < 1) throw ConfigError("dqn.target_sync must be >= 1");
    if (warmup < 0) throw ConfigError("dqn.warmup must be >= 0");
    if (buffer_capacity < batch_size) throw ConfigError("dqn.batch_size must not exceed dqn.buffer_capacity");
    if (episodes < 0) throw ConfigError("dqn.episodes must be >= 0");
    for (int h : hidden)
        if (h < 1) throw ConfigError("dqn.hidden layer widths must be positive");
    epsilon.validate();
}

namespace {

std::vector<int> layer_sizes(const Environment& env, const std::vector<int>& hidden) {
    std::vector<int> sizes{env.state_size()};
    sizes.insert(sizes.end(), hidden.begin(), hidden.end());
    sizes.push_back(env.action_count());
    return sizes;
}

} // namespace

DqnTrainer::DqnTrainer(const Environment& env, DqnConfig config, std::uint64_t seed)
    : env_(env), config_(std::move(config)),
      online_(Mlp::he_uniform(layer_sizes(env, config_.hidden), derive_seed(seed, 1))), target_(online_),
      adam_(make_adam(online_, config_.lr)), buffer_(static_cast<std::size_t>(config_.buffer_capacity)),
      explore_rng_(derive_seed(seed, 2)), sample_rng_(derive_seed(seed, 3)) {
    config_.validate();
}

EpisodeMetrics DqnTrainer::run_episode(int episode) {
    const double epsilon = config_.epsilon.value(episode, config_.episodes);
    const auto ready = static_cast<std::size_t>(std::max(config_.warmup, config_.batch_size));
    EpisodeAccumulator acc(env_.uav_count(), env_.device_count());
    EnvState state = env_.reset();
    std::vector<double> x = env_.encode_state(state);
    while (!state.done) {
        const int a = dqn_select(online_, x, epsilon, explore_rng_);
        StepOutcome out = env_.step(state, env_.action_decode(a));
        acc.add(out);
        std::vector<double> x_next = env_.encode_state(out.next_state);
        buffer_.push({x, a, out.reward, x_next, out.done});

        if (buffer_.size() >= ready) {
            const Minibatch batch = buffer_.sample(static_cast<std::size_t>(config_.batch_size), sample_rng_);
            const Eigen::VectorXd y = td_targets(batch, target_, config_.gamma);
            last_loss_ = train_step(online_, adam_, batch, y, config_.loss);
            if (++train_steps_ % config_.target_sync == 0) {
                copy_params(online_, target_);
                ++target_syncs_;
            }
        }
        state = std::move(out.next_state);
        x = std::move(x_next);
    }
    return acc.finish(episode);
}

TrainResult DqnTrainer::train(const Progress& progress) {
    TrainResult result;
    result.episodes.reserve(static_cast<std::size_t>(config_.episodes));
    for (int e = 0; e < config_.episodes; ++e) {
        result.episodes.push_back(run_episode(e));
        if (progress) progress(result.episodes.back());
    }
    result.net = online_;
    result.adam = adam_;
    result.train_steps = train_steps_;
    result.target_syncs = target_syncs_;
    return result;
}

TrainResult train_dqn(const Environment& env, const DqnConfig& config, std::uint64_t seed,
                      const DqnTrainer::Progress& progress) {
    DqnTrainer trainer(env, config, seed);
    return trainer.train(progress);
}

EpisodeMetrics run_episode(Policy& policy, const Environment& env, int episode, std::vector<TrajectoryRecord>* log) {
    EpisodeAccumulator acc(env.uav_count(), env.device_count());
    EnvState state = env.reset();
    while (!state.done) {
        const JointAction action = policy.act(env, state);
        StepOutcome out = env.step(state, action);
        acc.add(out);
        if (log) log->push_back(make_record(episode, state, action, env.action_index(action), out));
        state = std::move(out.next_state);
    }
    return acc.finish(episode);
}

} // namespace uavaoi
