#pragma once

// Fully connected Q-network with rectifier hidden layers, hand-written
// backpropagation and Adam. Double precision throughout.

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace uavaoi {

struct DenseLayer {
    Eigen::MatrixXd weight;  ///< out x in
    Eigen::VectorXd bias;    ///< out

    friend bool operator==(const DenseLayer& a, const DenseLayer& b) {
        return a.weight.rows() == b.weight.rows() && a.weight.cols() == b.weight.cols() &&
               a.bias.size() == b.bias.size() && a.weight == b.weight && a.bias == b.bias;
    }
};

class Mlp {
public:
    Mlp() = default;
    /// Zero-initialised network; `sizes` = {input, hidden..., output}.
    explicit Mlp(std::vector<int> sizes);

    /// He-style fan-in uniform weights U(-sqrt(6/fan_in), +sqrt(6/fan_in)), zero biases.
    static Mlp he_uniform(std::vector<int> sizes, std::uint64_t seed);

    /// Q-values, one row per input row.
    Eigen::MatrixXd forward(const Eigen::MatrixXd& states) const;
    Eigen::VectorXd forward_one(std::span<const double> state) const;

    int input_size() const { return sizes_.front(); }
    int output_size() const { return sizes_.back(); }
    const std::vector<int>& sizes() const { return sizes_; }
    std::vector<DenseLayer>& layers() { return layers_; }
    const std::vector<DenseLayer>& layers() const { return layers_; }
    std::size_t parameter_count() const;

    friend bool operator==(const Mlp&, const Mlp&) = default;

private:
    std::vector<int> sizes_;
    std::vector<DenseLayer> layers_;
};

using MlpGradients = std::vector<DenseLayer>;

struct LossOptions {
    bool huber = false;
    double huber_delta = 1.0;
    double max_grad_norm = 0.0;  ///< 0 disables global-norm clipping
};

struct AdamState {
    double lr = 1e-4;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    std::int64_t step = 0;
    std::vector<DenseLayer> m;
    std::vector<DenseLayer> v;

    friend bool operator==(const AdamState&, const AdamState&) = default;
};

AdamState make_adam(const Mlp& net, double lr = 1e-4);

struct Minibatch {
    Eigen::MatrixXd states;
    std::vector<int> actions;
    Eigen::VectorXd rewards;
    Eigen::MatrixXd next_states;
    std::vector<char> done;

    std::size_t size() const { return actions.size(); }
};

/// Loss over the taken actions only: mean (Q(s_i, a_i) - y_i)^2, or the
/// Huber variant. Writes the gradient of that loss into `grads`.
double loss_and_gradients(const Mlp& net, const Eigen::MatrixXd& states, std::span<const int> actions,
                          const Eigen::VectorXd& targets, MlpGradients& grads, const LossOptions& options = {});

/// One bias-corrected Adam update.
void adam_update(Mlp& net, AdamState& adam, const MlpGradients& grads);

/// y_i = r_i if done_i, else r_i + gamma * max_a Q_target(s'_i, a).
Eigen::VectorXd td_targets(const Minibatch& batch, const Mlp& target_net, double gamma);

/// Loss + backprop + one Adam step. Throws NumericError on a non-finite loss.
double train_step(Mlp& net, AdamState& adam, const Minibatch& batch, const Eigen::VectorXd& targets,
                  const LossOptions& options = {});

void copy_params(const Mlp& from, Mlp& to);

/// q + alpha * (r + gamma * max_next - q)
double tabular_q_update(double q, double alpha, double reward, double gamma, double max_next);

struct Checkpoint {
    Mlp net;
    AdamState adam;
    std::string metadata;  ///< free-form provenance text
};

void save_checkpoint(const std::filesystem::path& path, const Mlp& net, const AdamState& adam,
                     const std::string& metadata = {});
Checkpoint load_checkpoint(const std::filesystem::path& path);

} // namespace uavaoi
