#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include <boost/math/distributions/chi_squared.hpp>

#include "fixtures.hpp"
#include "uavaoi/errors.hpp"
#include "uavaoi/policies.hpp"
#include "uavaoi/replay_buffer.hpp"
#include "uavaoi/training.hpp"

using namespace uavaoi;

namespace {

// Pearson statistic against the uniform law, compared with the 0.999 quantile.
bool looks_uniform(const std::vector<int>& counts) {
    const double n = static_cast<double>(std::accumulate(counts.begin(), counts.end(), 0));
    const double expected = n / static_cast<double>(counts.size());
    double chi2 = 0.0;
    for (int c : counts) chi2 += (c - expected) * (c - expected) / expected;
    const boost::math::chi_squared dist(static_cast<double>(counts.size() - 1));
    return chi2 < boost::math::quantile(dist, 0.999);
}

TransitionRecord tagged(int tag) { return {{double(tag)}, tag, double(tag), {double(tag)}, false}; }

} // namespace

TEST(Epsilon, LinearThenFlat) {
    const EpsilonSchedule e;
    EXPECT_EQ(e.value(0, 100), 1.0);
    EXPECT_NEAR(e.value(25, 100), 0.525, 1e-15);
    EXPECT_EQ(e.value(50, 100), 0.05);
    EXPECT_EQ(e.value(99, 100), 0.05);
    double prev = 2.0;
    for (int ep = 0; ep < 300; ++ep) {
        const double v = e.value(ep, 300);
        EXPECT_LE(v, prev);
        EXPECT_GE(v, e.floor);
        EXPECT_LE(v, e.start);
        prev = v;
    }
    EXPECT_THROW((EpsilonSchedule{0.1, 0.5, 0.5}.validate()), ConfigError);
}

TEST(Select, ArgmaxTiesGoLow) {
    Eigen::VectorXd q(4);
    q << 1, 3, 3, 0;
    EXPECT_EQ(argmax_first(q), 1);
    Rng rng(1);
    const Mlp zero({3, 4, 6});
    const std::vector<double> x{0.3, -0.2, 0.9};
    for (int i = 0; i < 20; ++i) EXPECT_EQ(dqn_select(zero, x, 0.0, rng), 0);
}

TEST(Select, FullExplorationIsUniform) {
    const auto net = Mlp::he_uniform({3, 8, 30}, 4);
    const std::vector<double> x{0.1, 0.2, 0.3};
    Rng rng(17);
    std::vector<int> counts(30, 0);
    for (int i = 0; i < 10000; ++i) ++counts[static_cast<std::size_t>(dqn_select(net, x, 1.0, rng))];
    EXPECT_TRUE(looks_uniform(counts));
}

TEST(Select, GreedyIsDeterministicInState) {
    const auto net = Mlp::he_uniform({3, 8, 30}, 4);
    const std::vector<double> x{0.1, -0.7, 0.3};
    Rng a(1), b(999);
    EXPECT_EQ(dqn_select(net, x, 0.0, a), dqn_select(net, x, 0.0, b));
}

TEST(RandomWalk, UniformReproducibleDegenerate) {
    Rng rng(5);
    std::vector<int> counts(30, 0);
    for (int i = 0; i < 10000; ++i) ++counts[static_cast<std::size_t>(rw_select(30, rng))];
    EXPECT_TRUE(looks_uniform(counts));
    Rng a(8), b(8);
    for (int i = 0; i < 100; ++i) EXPECT_EQ(rw_select(900, a), rw_select(900, b));
    for (int i = 0; i < 10; ++i) EXPECT_EQ(rw_select(1, rng), 0);
}

TEST(GreedyAge, TieGoesToLowerCluster) {
    const auto env = fixture::singleton_clusters({{100, 0}, {-100, 0}, {0, 200}});
    auto s = env.reset();
    s.aoi = {3, 9, 9};
    EXPECT_EQ(ga_select(env, s).uavs[0].schedule, 2);
}

TEST(GreedyAge, DistinctTargetsByRank) {
    const auto env = fixture::singleton_clusters({{100, 0}, {-100, 0}, {0, 200}}, 2);
    auto s = env.reset();
    s.aoi = {5, 9, 7};
    const auto a = ga_select(env, s);
    EXPECT_EQ(a.uavs[0].schedule, 2);
    EXPECT_EQ(a.uavs[1].schedule, 3);
}

TEST(GreedyAge, MovesXFirstThenHoversOnArrival) {
    const auto env = fixture::singleton_clusters({{100, 200}});
    auto s = env.reset();  // (-2,-2)
    EXPECT_EQ(ga_select(env, s).uavs[0].move, Move::East);
    s.uavs[0].cell = {1, -2};
    EXPECT_EQ(ga_select(env, s).uavs[0].move, Move::North);
    s.uavs[0].cell = {1, 2};
    const auto a = ga_select(env, s);
    EXPECT_EQ(a.uavs[0].move, Move::Hover);
    EXPECT_EQ(a.uavs[0].schedule, 1);
}

TEST(GreedyAge, ScheduledClusterHasMaximalUnclaimedAge) {
    const auto cfg = fixture::small_config(7, 30, 3, 12.5e6, 60);
    const auto env = make_environment(cfg, generate_scenario(cfg, 2), 0.0);
    std::mt19937_64 rng(3);
    auto s = env.reset();
    for (int i = 0; i < 200; ++i) {
        for (auto& a : s.aoi) a = 1 + static_cast<int>(rng() % 30);
        const auto act = ga_select(env, s);
        std::set<int> claimed;
        for (const auto& ua : act.uavs) {
            int best = 0;
            for (int l = 0; l < env.cluster_count(); ++l)
                if (!claimed.count(l) && s.aoi[static_cast<std::size_t>(l)] > best) best = s.aoi[static_cast<std::size_t>(l)];
            EXPECT_EQ(s.aoi[static_cast<std::size_t>(ua.schedule - 1)], best);
            EXPECT_FALSE(claimed.count(ua.schedule - 1));
            claimed.insert(ua.schedule - 1);
        }
    }
}

TEST(NearestNeighbour, TieAndDistance) {
    const auto tie = fixture::singleton_clusters({{-100, -200}, {-200, -100}});
    Rng rng(1);
    EXPECT_EQ(nn_select(tie, tie.reset(), rng).uavs[0].schedule, 1);

    const auto env = fixture::singleton_clusters({{700, 400}, {-100, -200}}, 1, 11);
    auto s = env.reset();
    s.uavs[0].cell = {-2, -2};
    EXPECT_EQ(nn_select(env, s, rng).uavs[0].schedule, 2);
}

TEST(NearestNeighbour, MovesUniformAndScheduleMinimisesDistance) {
    const auto cfg = fixture::small_config(7, 30, 1, 12.5e6, 60);
    const auto env = make_environment(cfg, generate_scenario(cfg, 4), 0.0);
    Rng rng(6);
    auto s = env.reset();
    std::vector<int> counts(kMoveCount, 0);
    for (int i = 0; i < 10000; ++i) {
        s.uavs[0].cell = {static_cast<int>(rng() % 7) - 3, static_cast<int>(rng() % 7) - 3};
        const auto a = nn_select(env, s, rng);
        ++counts[static_cast<std::size_t>(a.uavs[0].move)];
        const Vec2 p = env.grid().center(s.uavs[0].cell);
        const double chosen = squared_distance(p, env.assignment().centroids[static_cast<std::size_t>(a.uavs[0].schedule - 1)]);
        for (const auto& c : env.assignment().centroids) EXPECT_LE(chosen, squared_distance(p, c));
    }
    EXPECT_TRUE(looks_uniform(counts));
}

TEST(Replay, FifoEvictionAndCapacity) {
    ReplayBuffer buf(8);
    for (int i = 0; i < 100; ++i) {
        buf.push(tagged(i));
        EXPECT_LE(buf.size(), 8u);
        const int oldest = std::max(0, i - 7);
        for (std::size_t j = 0; j < buf.size(); ++j) EXPECT_EQ(buf.at(j).action, oldest + static_cast<int>(j));
    }
}

TEST(Replay, SamplesAreDistinctAndUniform) {
    ReplayBuffer buf(20);
    for (int i = 0; i < 20; ++i) buf.push(tagged(i));
    Rng rng(2);
    std::vector<int> counts(20, 0);
    for (int trial = 0; trial < 4000; ++trial) {
        const auto idx = buf.sample_indices(5, rng);
        EXPECT_EQ(std::set<std::size_t>(idx.begin(), idx.end()).size(), 5u);
        for (auto i : idx) ++counts[i];
    }
    EXPECT_TRUE(looks_uniform(counts));
    const auto mb = buf.sample(4, rng);
    for (std::size_t i = 0; i < mb.size(); ++i) EXPECT_EQ(mb.rewards(static_cast<Eigen::Index>(i)), mb.actions[i]);
    EXPECT_THROW(buf.sample_indices(21, rng), ContractError);
}

TEST(Trainer, OneEpisodeFillsBufferWithEverySlot) {
    const auto env = fixture::singleton_clusters({{100, 0}, {-100, 100}}, 1, 5, 0.0, 5);
    DqnConfig cfg;
    cfg.episodes = 1;
    cfg.hidden = {8};
    DqnTrainer trainer(env, cfg, 3);
    const auto m = trainer.run_episode(0);
    EXPECT_EQ(m.length, 5);
    EXPECT_EQ(trainer.buffer().size(), 5u);
    EXPECT_EQ(trainer.train_steps(), 0);
}

TEST(Trainer, SameSeedSameMetrics) {
    const auto cfg = fixture::small_config(5, 10, 1, 6.25e6, 30);
    const auto env = make_environment(cfg, generate_scenario(cfg, 1), 0.0);
    DqnConfig dc;
    dc.episodes = 40;
    dc.hidden = {16, 16};
    dc.warmup = 64;
    dc.batch_size = 16;
    dc.target_sync = 50;
    const auto a = train_dqn(env, dc, 77);
    const auto b = train_dqn(env, dc, 77);
    ASSERT_EQ(a.episodes.size(), b.episodes.size());
    for (std::size_t i = 0; i < a.episodes.size(); ++i)
        EXPECT_EQ(a.episodes[i].accumulative_reward, b.episodes[i].accumulative_reward);
    EXPECT_EQ(a.net, b.net);
    EXPECT_GT(a.train_steps, 0);
    EXPECT_EQ(a.target_syncs, a.train_steps / 50);
}

TEST(Trainer, MyopicLearnerBeatsRandomWalkOnTinyGrid) {
    // two clusters, single UAV, no discounting: ages alone drive the reward
    const auto env = fixture::singleton_clusters({{-100, -100}, {100, 100}}, 1, 3, 0.0, 40);
    DqnConfig dc;
    dc.gamma = 0.0;
    dc.episodes = 500;
    dc.hidden = {32, 32};
    dc.lr = 1e-3;
    dc.warmup = 200;
    dc.batch_size = 32;
    dc.target_sync = 200;
    const auto trained = train_dqn(env, dc, 5);
    DqnPolicy dqn(trained.net);
    RandomWalkPolicy rw(9);
    double dqn_sum = 0, rw_sum = 0;
    for (int e = 0; e < 20; ++e) {
        dqn_sum += run_episode(dqn, env, e).accumulative_reward;
        rw_sum += run_episode(rw, env, e).accumulative_reward;
    }
    EXPECT_GE(dqn_sum, rw_sum);
}
