#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "oracles.hpp"
#include "uavaoi/errors.hpp"
#include "uavaoi/neural.hpp"

using namespace uavaoi;

namespace {

struct Batch {
    Eigen::MatrixXd states;
    std::vector<int> actions;
    Eigen::VectorXd targets;
};

Batch random_batch(int n, int in, int out, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Batch b{Eigen::MatrixXd(n, in), {}, Eigen::VectorXd(n)};
    for (int i = 0; i < n; ++i) {
        for (int c = 0; c < in; ++c) b.states(i, c) = u(rng);
        b.actions.push_back(static_cast<int>(rng() % static_cast<std::uint64_t>(out)));
        b.targets(i) = 2.0 * u(rng);
    }
    return b;
}

} // namespace

TEST(Forward, ZeroNetGivesZeros) {
    const Mlp net({4, 8, 3});
    const Eigen::MatrixXd x = Eigen::MatrixXd::Random(5, 4);
    EXPECT_TRUE(net.forward(x).isZero(0.0));
}

TEST(Forward, SingleAffineLayer) {
    Mlp net({2, 2});
    net.layers()[0].weight << 1, 2, 3, 4;
    net.layers()[0].bias << 0.5, -1;
    const std::vector<double> x{1.0, -2.0};
    const auto q = net.forward_one(x);
    EXPECT_EQ(q(0), 1 - 4 + 0.5);
    EXPECT_EQ(q(1), 3 - 8 - 1);
}

TEST(Forward, MatchesLoopOracle) {
    const auto net = Mlp::he_uniform({6, 16, 9, 4}, 12);
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int i = 0; i < 20; ++i) {
        std::vector<double> x(6);
        for (auto& v : x) v = u(rng);
        const auto want = oracle::forward_loops(net, x);
        const auto got = net.forward_one(x);
        for (int a = 0; a < 4; ++a) EXPECT_NEAR(got(a), want[static_cast<std::size_t>(a)], 1e-12);
    }
}

TEST(Init, HeUniformBoundsAndZeroBias) {
    const auto net = Mlp::he_uniform({10, 64, 5}, 3);
    for (const auto& l : net.layers()) {
        const double bound = std::sqrt(6.0 / static_cast<double>(l.weight.cols()));
        EXPECT_LE(l.weight.cwiseAbs().maxCoeff(), bound);
        EXPECT_GT(l.weight.cwiseAbs().maxCoeff(), 0.5 * bound);
        EXPECT_TRUE(l.bias.isZero(0.0));
    }
    EXPECT_EQ(net.parameter_count(), 10u * 64 + 64 + 64 * 5 + 5);
    EXPECT_EQ(net, Mlp::he_uniform({10, 64, 5}, 3));
    EXPECT_FALSE(net == Mlp::he_uniform({10, 64, 5}, 4));
}

TEST(Gradients, MatchCentralDifferences) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto net = Mlp::he_uniform({4, 8, 3}, seed);
        const auto b = random_batch(6, 4, 3, seed + 100);
        EXPECT_LE(oracle::gradient_check(net, b.states, b.actions, b.targets), 1e-4) << "seed " << seed;
    }
}

TEST(Gradients, OnlyTakenActionsContribute) {
    const auto net = Mlp::he_uniform({3, 5, 4}, 2);
    auto b = random_batch(4, 3, 4, 7);
    for (auto& a : b.actions) a = 1;
    MlpGradients g;
    loss_and_gradients(net, b.states, b.actions, b.targets, g);
    const auto& last = g.back();
    for (int r : {0, 2, 3}) {
        EXPECT_TRUE(last.weight.row(r).isZero(0.0));
        EXPECT_EQ(last.bias(r), 0.0);
    }
}

TEST(TrainStep, ZeroErrorLeavesParametersUnchanged) {
    auto net = Mlp::he_uniform({3, 6, 2}, 5);
    auto adam = make_adam(net);
    Minibatch mb;
    mb.states = Eigen::MatrixXd::Random(4, 3);
    mb.actions = {0, 1, 1, 0};
    const Eigen::MatrixXd q = net.forward(mb.states);
    Eigen::VectorXd y(4);
    for (int i = 0; i < 4; ++i) y(i) = q(i, mb.actions[static_cast<std::size_t>(i)]);
    const Mlp before = net;
    EXPECT_EQ(train_step(net, adam, mb, y), 0.0);
    EXPECT_EQ(net, before);
}

TEST(TrainStep, FirstAdamStepOnScalar) {
    // Q = w with w = 1, target 0: loss 1, gradient 2, m_hat = 2, v_hat = 4
    Mlp net({1, 1});
    net.layers()[0].weight(0, 0) = 1.0;
    auto adam = make_adam(net, 1e-4);
    Minibatch mb;
    mb.states = Eigen::MatrixXd::Ones(1, 1);
    mb.actions = {0};
    Eigen::VectorXd y = Eigen::VectorXd::Zero(1);
    MlpGradients g;
    EXPECT_EQ(loss_and_gradients(net, mb.states, mb.actions, y, g), 1.0);
    EXPECT_EQ(g[0].weight(0, 0), 2.0);
    const double loss = train_step(net, adam, mb, y);
    EXPECT_EQ(loss, 1.0);
    const double step = 1e-4 * 2.0 / (2.0 + 1e-8);
    EXPECT_NEAR(net.layers()[0].weight(0, 0), 1.0 - step, 1e-15);
    EXPECT_NEAR(1.0 - net.layers()[0].weight(0, 0), 1e-4, 1e-11);
    EXPECT_EQ(adam.step, 1);
}

TEST(TrainStep, OverfitsFixedBatch) {
    auto net = Mlp::he_uniform({4, 16, 16, 3}, 9);
    auto adam = make_adam(net, 1e-3);
    const auto b = random_batch(16, 4, 3, 10);
    Minibatch mb{b.states, b.actions, Eigen::VectorXd::Zero(16), b.states, std::vector<char>(16, 0)};
    double prev = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 60; ++i) {
        const double loss = train_step(net, adam, mb, b.targets);
        EXPECT_LT(loss, prev) << "iteration " << i;
        prev = loss;
    }
}

TEST(TrainStep, NonFiniteLossAborts) {
    auto net = Mlp::he_uniform({2, 3, 2}, 1);
    auto adam = make_adam(net);
    Minibatch mb;
    mb.states = Eigen::MatrixXd::Ones(1, 2);
    mb.actions = {0};
    Eigen::VectorXd y(1);
    y(0) = std::numeric_limits<double>::quiet_NaN();
    EXPECT_THROW(train_step(net, adam, mb, y), NumericError);
}

TEST(TrainStep, Deterministic) {
    auto run = [] {
        auto net = Mlp::he_uniform({5, 12, 4}, 21);
        auto adam = make_adam(net);
        for (std::uint64_t s = 0; s < 25; ++s) {
            const auto b = random_batch(8, 5, 4, s);
            Minibatch mb{b.states, b.actions, Eigen::VectorXd::Zero(8), b.states, std::vector<char>(8, 0)};
            train_step(net, adam, mb, b.targets);
        }
        return std::make_pair(net, adam);
    };
    const auto a = run(), b = run();
    EXPECT_EQ(a.first, b.first);
    EXPECT_EQ(a.second, b.second);
}

TEST(Targets, TerminalMyopicAndBootstrap) {
    Mlp target({1, 2});
    target.layers()[0].bias << 10.0, 3.0;
    Minibatch mb;
    mb.rewards = Eigen::VectorXd(2);
    mb.rewards << -5.0, -5.0;
    mb.next_states = Eigen::MatrixXd::Zero(2, 1);
    mb.done = {1, 0};
    mb.actions = {0, 0};
    const auto y = td_targets(mb, target, 0.99);
    EXPECT_EQ(y(0), -5.0);
    EXPECT_NEAR(y(1), 4.9, 1e-12);
    const auto myopic = td_targets(mb, target, 0.0);
    EXPECT_EQ(myopic(0), -5.0);
    EXPECT_EQ(myopic(1), -5.0);
}

TEST(Tabular, ClosedForms) {
    EXPECT_NEAR(tabular_q_update(0.0, 0.5, 1.0, 0.9, 2.0), 1.4, 1e-15);
    EXPECT_EQ(tabular_q_update(7.0, 1.0, 1.0, 0.5, 4.0), 3.0);
    EXPECT_EQ(tabular_q_update(3.0, 0.3, 1.0, 0.5, 4.0), 3.0);
}

TEST(CopyParams, OutputsIdentical) {
    const auto a = Mlp::he_uniform({3, 7, 2}, 1);
    auto b = Mlp::he_uniform({3, 7, 2}, 2);
    copy_params(a, b);
    EXPECT_EQ(a, b);
    const Eigen::MatrixXd x = Eigen::MatrixXd::Random(10, 3);
    EXPECT_EQ(a.forward(x), b.forward(x));
}

TEST(Checkpoint, RoundTripsBitExactly) {
    auto net = Mlp::he_uniform({4, 9, 3}, 6);
    auto adam = make_adam(net);
    const auto b = random_batch(5, 4, 3, 2);
    Minibatch mb{b.states, b.actions, Eigen::VectorXd::Zero(5), b.states, std::vector<char>(5, 0)};
    for (int i = 0; i < 3; ++i) train_step(net, adam, mb, b.targets);

    const auto path = std::filesystem::temp_directory_path() / "uavaoi_ckpt_roundtrip.bin";
    save_checkpoint(path, net, adam, "hash=abc");
    const auto ck = load_checkpoint(path);
    EXPECT_EQ(ck.net, net);
    EXPECT_EQ(ck.adam, adam);
    EXPECT_EQ(ck.metadata, "hash=abc");
    std::filesystem::remove(path);
}

TEST(Checkpoint, MissingOrCorruptFile) {
    const auto dir = std::filesystem::temp_directory_path();
    EXPECT_THROW(load_checkpoint(dir / "uavaoi_no_such_checkpoint.bin"), ConfigError);
    const auto junk = dir / "uavaoi_junk_checkpoint.bin";
    {
        std::ofstream os(junk, std::ios::binary);
        os << "not a checkpoint at all";
    }
    EXPECT_THROW(load_checkpoint(junk), ConfigError);
    std::filesystem::remove(junk);
}
