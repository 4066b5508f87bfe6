#pragma once

#include <memory>
#include <span>
#include <string>

#include <Eigen/Dense>

#include "uavaoi/environment.hpp"
#include "uavaoi/neural.hpp"
#include "uavaoi/rng.hpp"

namespace uavaoi {

/// Linear decay from `start` to `floor` over the first `decay_fraction` of
/// the episodes, flat afterwards.
struct EpsilonSchedule {
    double start = 1.0;
    double floor = 0.05;
    double decay_fraction = 0.5;

    void validate() const;
    double value(int episode, int total_episodes) const;
};

/// Index of the first maximal entry.
int argmax_first(const Eigen::VectorXd& q);

/// Epsilon-greedy over the network's Q-values; ties go to the lowest index.
int dqn_select(const Mlp& net, std::span<const double> state, double epsilon, Rng& rng);

/// Uniform over the joint action space.
int rw_select(int action_count, Rng& rng);

/// Greedy-age: UAVs in index order claim distinct clusters by decreasing AoI
/// (lower id on ties), schedule their target and step towards its centroid
/// cell, x-axis first.
JointAction ga_select(const Environment& env, const EnvState& state);

/// Nearest-neighbour: schedule the cluster whose centroid is closest to the
/// UAV's cell centre (lower id on ties) and move uniformly at random.
JointAction nn_select(const Environment& env, const EnvState& state, Rng& rng);

class Policy {
public:
    virtual ~Policy() = default;
    virtual std::string name() const = 0;
    virtual JointAction act(const Environment& env, const EnvState& state) = 0;
};

class GreedyAgePolicy final : public Policy {
public:
    std::string name() const override { return "ga"; }
    JointAction act(const Environment& env, const EnvState& state) override { return ga_select(env, state); }
};

class NearestNeighbourPolicy final : public Policy {
public:
    explicit NearestNeighbourPolicy(std::uint64_t seed) : rng_(seed) {}
    std::string name() const override { return "nn"; }
    JointAction act(const Environment& env, const EnvState& state) override { return nn_select(env, state, rng_); }

private:
    Rng rng_;
};

class RandomWalkPolicy final : public Policy {
public:
    explicit RandomWalkPolicy(std::uint64_t seed) : rng_(seed) {}
    std::string name() const override { return "rw"; }
    JointAction act(const Environment& env, const EnvState&) override {
        return env.action_decode(rw_select(env.action_count(), rng_));
    }

private:
    Rng rng_;
};

/// Frozen Q-network acting greedily (epsilon = 0).
class DqnPolicy final : public Policy {
public:
    explicit DqnPolicy(Mlp net) : net_(std::move(net)) {}
    std::string name() const override { return "dqn"; }
    JointAction act(const Environment& env, const EnvState& state) override;
    const Mlp& net() const { return net_; }

private:
    Mlp net_;
};

/// "ga", "nn" or "rw".
std::unique_ptr<Policy> make_baseline(const std::string& name, std::uint64_t seed);

} // namespace uavaoi
