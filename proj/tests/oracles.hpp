#pragma once

// Independent reference computations shared by the unit and acceptance suites.
// None of these call into the library code they check.

#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "uavaoi/clustering.hpp"
#include "uavaoi/neural.hpp"
#include "uavaoi/physics.hpp"
#include "uavaoi/scenario.hpp"
#include "uavaoi/trajectory_log.hpp"

namespace oracle {

using Wide = boost::multiprecision::cpp_bin_float_100;

/// Rotary-wing power in extended precision with the literal difference form.
inline Wide propulsion(double v_in, const uavaoi::PropulsionParams& pp) {
    const Wide v = v_in;
    const Wide s0 = pp.mean_induced_velocity_mps;
    const Wide tip = pp.tip_speed_mps;
    const Wide blade = Wide(pp.blade_profile_power_w) * (1 + 3 * v * v / (tip * tip));
    const Wide a = v * v / (2 * s0 * s0);
    const Wide induced = Wide(pp.induced_power_w) * sqrt(sqrt(1 + a * a) - a);
    const Wide drag = Wide(0.5) * pp.fuselage_drag_ratio * pp.air_density * pp.rotor_solidity * pp.rotor_disk_area *
                      v * v * v;
    return blade + induced + drag;
}

inline Wide induced_factor(double v_in, double s0_in) {
    const Wide v = v_in, s0 = s0_in;
    const Wide a = v * v / (2 * s0 * s0);
    return sqrt(sqrt(1 + a * a) - a);
}

/// Minimum within-cluster SSE over every assignment of the devices to
/// `clusters` labels with at most `capacity` members each.
inline double exhaustive_min_sse(std::span<const uavaoi::Device> devices, int clusters, int capacity) {
    const int k = static_cast<int>(devices.size());
    std::vector<int> label(static_cast<std::size_t>(k), 0);
    double best = std::numeric_limits<double>::infinity();
    while (true) {
        std::vector<int> count(static_cast<std::size_t>(clusters), 0);
        bool ok = true;
        for (int l : label)
            if (++count[static_cast<std::size_t>(l)] > capacity) ok = false;
        if (ok) {
            double sse = 0.0;
            for (int c = 0; c < clusters; ++c) {
                double sx = 0, sy = 0;
                int n = 0;
                for (int i = 0; i < k; ++i)
                    if (label[static_cast<std::size_t>(i)] == c) sx += devices[static_cast<std::size_t>(i)].xy.x,
                                                                 sy += devices[static_cast<std::size_t>(i)].xy.y, ++n;
                if (n == 0) continue;
                const double mx = sx / n, my = sy / n;
                for (int i = 0; i < k; ++i)
                    if (label[static_cast<std::size_t>(i)] == c) {
                        const double dx = devices[static_cast<std::size_t>(i)].xy.x - mx;
                        const double dy = devices[static_cast<std::size_t>(i)].xy.y - my;
                        sse += dx * dx + dy * dy;
                    }
            }
            best = std::min(best, sse);
        }
        int pos = 0;
        while (pos < k && ++label[static_cast<std::size_t>(pos)] == clusters) label[static_cast<std::size_t>(pos++)] = 0;
        if (pos == k) break;
    }
    return best;
}

/// Forward pass written out loop by loop.
inline std::vector<double> forward_loops(const uavaoi::Mlp& net, const std::vector<double>& x) {
    std::vector<double> a = x;
    const auto& layers = net.layers();
    for (std::size_t li = 0; li < layers.size(); ++li) {
        const auto& l = layers[li];
        std::vector<double> z(static_cast<std::size_t>(l.weight.rows()));
        for (Eigen::Index r = 0; r < l.weight.rows(); ++r) {
            double s = l.bias(r);
            for (Eigen::Index c = 0; c < l.weight.cols(); ++c) s += l.weight(r, c) * a[static_cast<std::size_t>(c)];
            z[static_cast<std::size_t>(r)] = (li + 1 < layers.size()) ? std::max(0.0, s) : s;
        }
        a = std::move(z);
    }
    return a;
}

/// Mean squared TD error over the taken actions, through the loop forward pass.
inline double mse_loss(const uavaoi::Mlp& net, const Eigen::MatrixXd& states, std::span<const int> actions,
                       const Eigen::VectorXd& targets) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < states.rows(); ++i) {
        std::vector<double> x(static_cast<std::size_t>(states.cols()));
        for (Eigen::Index c = 0; c < states.cols(); ++c) x[static_cast<std::size_t>(c)] = states(i, c);
        const double q = forward_loops(net, x)[static_cast<std::size_t>(actions[static_cast<std::size_t>(i)])];
        sum += (q - targets(i)) * (q - targets(i));
    }
    return sum / static_cast<double>(states.rows());
}

/// Worst relative error between analytic and central-difference gradients.
inline double gradient_check(uavaoi::Mlp net, const Eigen::MatrixXd& states, std::span<const int> actions,
                             const Eigen::VectorXd& targets, double h = 1e-5) {
    uavaoi::MlpGradients grads;
    uavaoi::loss_and_gradients(net, states, actions, targets, grads);
    double worst = 0.0;
    auto check = [&](double& param, double analytic) {
        const double saved = param;
        param = saved + h;
        const double up = mse_loss(net, states, actions, targets);
        param = saved - h;
        const double down = mse_loss(net, states, actions, targets);
        param = saved;
        const double numeric = (up - down) / (2 * h);
        const double scale = std::max({std::abs(analytic), std::abs(numeric), 1e-6});
        worst = std::max(worst, std::abs(analytic - numeric) / scale);
    };
    for (std::size_t li = 0; li < net.layers().size(); ++li) {
        auto& l = net.layers()[li];
        for (Eigen::Index r = 0; r < l.weight.rows(); ++r)
            for (Eigen::Index c = 0; c < l.weight.cols(); ++c) check(l.weight(r, c), grads[li].weight(r, c));
        for (Eigen::Index r = 0; r < l.bias.size(); ++r) check(l.bias(r), grads[li].bias(r));
    }
    return worst;
}

/// Reward of one logged slot from the scenario file contents alone: weights and
/// positions of the devices, cluster membership by id, and the UAV cells at slot start.
inline double slot_reward(const uavaoi::TrajectoryRecord& r, const uavaoi::Scenario& s, const uavaoi::SystemParams& p) {
    const double k = static_cast<double>(s.devices.size());
    double age = 0.0;
    for (std::size_t l = 0; l < r.aoi.size(); ++l)
        for (int id : s.assignment.members[l]) age += s.devices[static_cast<std::size_t>(id)].weight * r.aoi[l];
    double power = 0.0;
    for (std::size_t u = 0; u < r.effective.size(); ++u) {
        if (r.effective[u] == 0) continue;
        const double ux = r.from[u].x * s.grid.cell_size_m, uy = r.from[u].y * s.grid.cell_size_m;
        for (int id : s.assignment.members[static_cast<std::size_t>(r.effective[u] - 1)]) {
            const auto& d = s.devices[static_cast<std::size_t>(id)];
            const double dx = d.xy.x - ux, dy = d.xy.y - uy;
            const double h = p.uav_altitude_m;
            power += (std::pow(2.0, p.packet_bits / p.bandwidth_hz) - 1.0) * p.noise_power_w * (dx * dx + dy * dy + h * h) /
                     p.ref_channel_gain;
        }
    }
    return -age - p.tradeoff_lambda * (power / k) / p.reward_power_unit_w;
}

} // namespace oracle
