#include "uavaoi/policies.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "uavaoi/errors.hpp"

namespace uavaoi {

void EpsilonSchedule::validate() const {
    if (!(start >= 0.0 && start <= 1.0 && floor >= 0.0 && floor <= start))
        throw ConfigError("epsilon schedule needs 0 <= floor <= start <= 1");
    if (!(decay_fraction >= 0.0 && decay_fraction <= 1.0))
        throw ConfigError("epsilon decay_fraction must be in [0, 1]");
}

double EpsilonSchedule::value(int episode, int total_episodes) const {
    const double horizon = decay_fraction * static_cast<double>(total_episodes);
    if (horizon <= 0.0 || episode >= horizon) return floor;
    return start - (start - floor) * (static_cast<double>(episode) / horizon);
}

int argmax_first(const Eigen::VectorXd& q) {
    int best = 0;
    for (Eigen::Index a = 1; a < q.size(); ++a)
        if (q(a) > q(best)) best = static_cast<int>(a);
    return best;
}

int dqn_select(const Mlp& net, std::span<const double> state, double epsilon, Rng& rng) {
    if (epsilon > 0.0 && std::uniform_real_distribution<double>(0.0, 1.0)(rng) < epsilon)
        return std::uniform_int_distribution<int>(0, net.output_size() - 1)(rng);
    return argmax_first(net.forward_one(state));
}

int rw_select(int action_count, Rng& rng) {
    if (action_count < 1) throw ContractError("empty action space");
    return std::uniform_int_distribution<int>(0, action_count - 1)(rng);
}

namespace {

Move step_towards(Cell from, Cell to) {
    if (to.x > from.x) return Move::East;
    if (to.x < from.x) return Move::West;
    if (to.y > from.y) return Move::North;
    if (to.y < from.y) return Move::South;
    return Move::Hover;
}

} // namespace

JointAction ga_select(const Environment& env, const EnvState& state) {
    const int n_clusters = env.cluster_count();
    std::vector<int> order(static_cast<std::size_t>(n_clusters));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return state.aoi[static_cast<std::size_t>(a)] > state.aoi[static_cast<std::size_t>(b)];
    });

    JointAction action;
    action.uavs.resize(state.uavs.size());
    for (std::size_t u = 0; u < state.uavs.size(); ++u) {
        if (u >= order.size()) continue;  // more UAVs than clusters: the rest idle
        const int target = order[u];
        const Cell goal = env.grid().nearest_cell(env.assignment().centroids[static_cast<std::size_t>(target)]);
        action.uavs[u].move = step_towards(state.uavs[u].cell, goal);
        action.uavs[u].schedule = target + 1;
    }
    return action;
}

JointAction nn_select(const Environment& env, const EnvState& state, Rng& rng) {
    const auto& centroids = env.assignment().centroids;
    JointAction action;
    action.uavs.resize(state.uavs.size());
    std::uniform_int_distribution<int> move_dist(0, kMoveCount - 1);
    for (std::size_t u = 0; u < state.uavs.size(); ++u) {
        const Vec2 pos = env.grid().center(state.uavs[u].cell);
        int best = 0;
        double best_d2 = std::numeric_limits<double>::infinity();
        for (std::size_t l = 0; l < centroids.size(); ++l) {
            const double d2 = squared_distance(pos, centroids[l]);
            if (d2 < best_d2) {
                best_d2 = d2;
                best = static_cast<int>(l);
            }
        }
        action.uavs[u].schedule = best + 1;
        action.uavs[u].move = static_cast<Move>(move_dist(rng));
    }
    return action;
}

JointAction DqnPolicy::act(const Environment& env, const EnvState& state) {
    const auto x = env.encode_state(state);
    return env.action_decode(argmax_first(net_.forward_one(x)));
}

std::unique_ptr<Policy> make_baseline(const std::string& name, std::uint64_t seed) {
    if (name == "ga") return std::make_unique<GreedyAgePolicy>();
    if (name == "nn") return std::make_unique<NearestNeighbourPolicy>(seed);
    if (name == "rw") return std::make_unique<RandomWalkPolicy>(seed);
    throw ConfigError("unknown baseline policy '" + name + "'");
}

} // namespace uavaoi
