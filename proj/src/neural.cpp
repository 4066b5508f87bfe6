#include "uavaoi/neural.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <random>
#include <sstream>

#include "uavaoi/errors.hpp"

namespace uavaoi {

namespace {

void check_sizes(const std::vector<int>& sizes) {
    if (sizes.size() < 2) throw ConfigError("a network needs at least an input and an output size");
    for (int s : sizes)
        if (s < 1) throw ConfigError("layer sizes must be positive");
}

std::vector<DenseLayer> zeros_like(const std::vector<DenseLayer>& layers) {
    std::vector<DenseLayer> out;
    out.reserve(layers.size());
    for (const auto& l : layers)
        out.push_back({Eigen::MatrixXd::Zero(l.weight.rows(), l.weight.cols()), Eigen::VectorXd::Zero(l.bias.size())});
    return out;
}

} // namespace

Mlp::Mlp(std::vector<int> sizes) : sizes_(std::move(sizes)) {
    check_sizes(sizes_);
    for (std::size_t i = 0; i + 1 < sizes_.size(); ++i)
        layers_.push_back({Eigen::MatrixXd::Zero(sizes_[i + 1], sizes_[i]), Eigen::VectorXd::Zero(sizes_[i + 1])});
}

Mlp Mlp::he_uniform(std::vector<int> sizes, std::uint64_t seed) {
    Mlp net(std::move(sizes));
    std::mt19937_64 rng(seed);
    for (auto& layer : net.layers_) {
        const double bound = std::sqrt(6.0 / static_cast<double>(layer.weight.cols()));
        std::uniform_real_distribution<double> dist(-bound, bound);
        // Fill row by row so the stream order does not depend on storage order.
        for (Eigen::Index r = 0; r < layer.weight.rows(); ++r)
            for (Eigen::Index c = 0; c < layer.weight.cols(); ++c) layer.weight(r, c) = dist(rng);
    }
    return net;
}

std::size_t Mlp::parameter_count() const {
    std::size_t n = 0;
    for (const auto& l : layers_) n += static_cast<std::size_t>(l.weight.size() + l.bias.size());
    return n;
}

Eigen::MatrixXd Mlp::forward(const Eigen::MatrixXd& states) const {
    if (states.cols() != input_size())
        throw ContractError("forward: input width " + std::to_string(states.cols()) + " != network input " +
                            std::to_string(input_size()));
    Eigen::MatrixXd a = states;
    for (std::size_t i = 0; i < layers_.size(); ++i) {
        Eigen::MatrixXd z = a * layers_[i].weight.transpose();
        z.rowwise() += layers_[i].bias.transpose();
        if (i + 1 < layers_.size()) z = z.cwiseMax(0.0);
        a = std::move(z);
    }
    return a;
}

Eigen::VectorXd Mlp::forward_one(std::span<const double> state) const {
    Eigen::MatrixXd x(1, static_cast<Eigen::Index>(state.size()));
    for (std::size_t j = 0; j < state.size(); ++j) x(0, static_cast<Eigen::Index>(j)) = state[j];
    return forward(x).row(0).transpose();
}

double loss_and_gradients(const Mlp& net, const Eigen::MatrixXd& states, std::span<const int> actions,
                          const Eigen::VectorXd& targets, MlpGradients& grads, const LossOptions& options) {
    const auto& layers = net.layers();
    const Eigen::Index batch = states.rows();
    if (states.cols() != net.input_size()) throw ContractError("loss: input width mismatch");
    if (static_cast<Eigen::Index>(actions.size()) != batch || targets.size() != batch || batch == 0)
        throw ContractError("loss: batch size mismatch");

    // Forward pass, keeping every activation.
    std::vector<Eigen::MatrixXd> acts;
    acts.reserve(layers.size() + 1);
    acts.push_back(states);
    for (std::size_t i = 0; i < layers.size(); ++i) {
        Eigen::MatrixXd z = acts.back() * layers[i].weight.transpose();
        z.rowwise() += layers[i].bias.transpose();
        if (i + 1 < layers.size()) z = z.cwiseMax(0.0);
        acts.push_back(std::move(z));
    }
    const Eigen::MatrixXd& q = acts.back();

    Eigen::MatrixXd delta = Eigen::MatrixXd::Zero(batch, q.cols());
    double loss = 0.0;
    const double inv_b = 1.0 / static_cast<double>(batch);
    for (Eigen::Index i = 0; i < batch; ++i) {
        const int a = actions[static_cast<std::size_t>(i)];
        if (a < 0 || a >= q.cols()) throw ContractError("loss: action index out of range");
        const double err = q(i, a) - targets(i);
        if (options.huber && std::abs(err) > options.huber_delta) {
            loss += options.huber_delta * (std::abs(err) - 0.5 * options.huber_delta);
            delta(i, a) = options.huber_delta * (err > 0.0 ? 1.0 : -1.0) * inv_b;
        } else if (options.huber) {
            loss += 0.5 * err * err;
            delta(i, a) = err * inv_b;
        } else {
            loss += err * err;
            delta(i, a) = 2.0 * err * inv_b;
        }
    }
    loss *= inv_b;

    grads = zeros_like(layers);
    for (std::size_t i = layers.size(); i-- > 0;) {
        grads[i].weight.noalias() = delta.transpose() * acts[i];
        grads[i].bias = delta.colwise().sum().transpose();
        if (i > 0) {
            Eigen::MatrixXd back = delta * layers[i].weight;
            delta = back.cwiseProduct((acts[i].array() > 0.0).cast<double>().matrix());
        }
    }

    if (options.max_grad_norm > 0.0) {
        double sq = 0.0;
        for (const auto& g : grads) sq += g.weight.squaredNorm() + g.bias.squaredNorm();
        const double norm = std::sqrt(sq);
        if (norm > options.max_grad_norm) {
            const double scale = options.max_grad_norm / norm;
            for (auto& g : grads) {
                g.weight *= scale;
                g.bias *= scale;
            }
        }
    }
    return loss;
}

AdamState make_adam(const Mlp& net, double lr) {
    AdamState adam;
    adam.lr = lr;
    adam.m = zeros_like(net.layers());
    adam.v = zeros_like(net.layers());
    return adam;
}

void adam_update(Mlp& net, AdamState& adam, const MlpGradients& grads) {
    auto& layers = net.layers();
    if (adam.m.size() != layers.size() || grads.size() != layers.size())
        throw ContractError("adam: state does not match the network");
    ++adam.step;
    const double c1 = 1.0 - std::pow(adam.beta1, static_cast<double>(adam.step));
    const double c2 = 1.0 - std::pow(adam.beta2, static_cast<double>(adam.step));
    auto update = [&](auto& param, auto& m, auto& v, const auto& g) {
        m = adam.beta1 * m + (1.0 - adam.beta1) * g;
        v = adam.beta2 * v + (1.0 - adam.beta2) * g.cwiseProduct(g);
        param.array() -= adam.lr * (m.array() / c1) / ((v.array() / c2).sqrt() + adam.epsilon);
    };
    for (std::size_t i = 0; i < layers.size(); ++i) {
        update(layers[i].weight, adam.m[i].weight, adam.v[i].weight, grads[i].weight);
        update(layers[i].bias, adam.m[i].bias, adam.v[i].bias, grads[i].bias);
    }
}

Eigen::VectorXd td_targets(const Minibatch& batch, const Mlp& target_net, double gamma) {
    const auto n = static_cast<Eigen::Index>(batch.size());
    Eigen::VectorXd y = batch.rewards;
    if (y.size() != n || static_cast<Eigen::Index>(batch.done.size()) != n)
        throw ContractError("td_targets: batch fields disagree in length");
    bool any_live = false;
    for (char d : batch.done) any_live = any_live || !d;
    if (!any_live || gamma == 0.0) return y;
    const Eigen::MatrixXd q_next = target_net.forward(batch.next_states);
    for (Eigen::Index i = 0; i < n; ++i)
        if (!batch.done[static_cast<std::size_t>(i)]) y(i) = batch.rewards(i) + gamma * q_next.row(i).maxCoeff();
    return y;
}

double train_step(Mlp& net, AdamState& adam, const Minibatch& batch, const Eigen::VectorXd& targets,
                  const LossOptions& options) {
    MlpGradients grads;
    const double loss = loss_and_gradients(net, batch.states, batch.actions, targets, grads, options);
    if (!std::isfinite(loss)) {
        std::ostringstream msg;
        msg << "non-finite training loss at Adam step " << adam.step << " (batch " << batch.size()
            << ", target range [" << targets.minCoeff() << ", " << targets.maxCoeff() << "])";
        throw NumericError(msg.str());
    }
    adam_update(net, adam, grads);
    return loss;
}

void copy_params(const Mlp& from, Mlp& to) { to = from; }

double tabular_q_update(double q, double alpha, double reward, double gamma, double max_next) {
    return q + alpha * (reward + gamma * max_next - q);
}

// Checkpoint layout (little-endian host order):
//   "UAVQCKP1" | u32 version | u32 n_sizes | i32 sizes[n]
//   per layer: f64 weight (row-major), f64 bias
//   f64 lr, beta1, beta2, epsilon | i64 step | per layer: m then v, as above
//   u32 metadata length | metadata bytes
namespace {

constexpr char kMagic[8] = {'U', 'A', 'V', 'Q', 'C', 'K', 'P', '1'};
constexpr std::uint32_t kVersion = 1;

template <class T>
void put(std::ostream& os, const T& v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is) throw ConfigError("checkpoint is truncated");
    return v;
}

void put_layers(std::ostream& os, const std::vector<DenseLayer>& layers) {
    for (const auto& l : layers) {
        for (Eigen::Index r = 0; r < l.weight.rows(); ++r)
            for (Eigen::Index c = 0; c < l.weight.cols(); ++c) put(os, l.weight(r, c));
        for (Eigen::Index r = 0; r < l.bias.size(); ++r) put(os, l.bias(r));
    }
}

void get_layers(std::istream& is, std::vector<DenseLayer>& layers) {
    for (auto& l : layers) {
        for (Eigen::Index r = 0; r < l.weight.rows(); ++r)
            for (Eigen::Index c = 0; c < l.weight.cols(); ++c) l.weight(r, c) = get<double>(is);
        for (Eigen::Index r = 0; r < l.bias.size(); ++r) l.bias(r) = get<double>(is);
    }
}

} // namespace

void save_checkpoint(const std::filesystem::path& path, const Mlp& net, const AdamState& adam,
                     const std::string& metadata) {
    const auto tmp = std::filesystem::path(path.string() + ".tmp");
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw std::runtime_error("cannot write checkpoint " + tmp.string());
        os.write(kMagic, sizeof kMagic);
        put(os, kVersion);
        put(os, static_cast<std::uint32_t>(net.sizes().size()));
        for (int s : net.sizes()) put(os, static_cast<std::int32_t>(s));
        put_layers(os, net.layers());
        put(os, adam.lr);
        put(os, adam.beta1);
        put(os, adam.beta2);
        put(os, adam.epsilon);
        put(os, static_cast<std::int64_t>(adam.step));
        const bool has_moments = adam.m.size() == net.layers().size();
        put_layers(os, has_moments ? adam.m : make_adam(net).m);
        put_layers(os, has_moments ? adam.v : make_adam(net).v);
        put(os, static_cast<std::uint32_t>(metadata.size()));
        os.write(metadata.data(), static_cast<std::streamsize>(metadata.size()));
        if (!os) throw std::runtime_error("failed writing checkpoint " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ConfigError("missing checkpoint " + path.string());
    char magic[8];
    is.read(magic, sizeof magic);
    if (!is || std::memcmp(magic, kMagic, sizeof kMagic) != 0) throw ConfigError("not a Q-network checkpoint: " + path.string());
    if (get<std::uint32_t>(is) != kVersion) throw ConfigError("unsupported checkpoint version");
    const auto n = get<std::uint32_t>(is);
    if (n < 2 || n > 64) throw ConfigError("checkpoint has an implausible layer count");
    std::vector<int> sizes;
    for (std::uint32_t i = 0; i < n; ++i) {
        const auto s = get<std::int32_t>(is);
        if (s < 1 || s > (1 << 24)) throw ConfigError("checkpoint has an implausible layer size");
        sizes.push_back(s);
    }
    Checkpoint ck{Mlp(sizes), {}, {}};
    get_layers(is, ck.net.layers());
    ck.adam = make_adam(ck.net);
    ck.adam.lr = get<double>(is);
    ck.adam.beta1 = get<double>(is);
    ck.adam.beta2 = get<double>(is);
    ck.adam.epsilon = get<double>(is);
    ck.adam.step = get<std::int64_t>(is);
    get_layers(is, ck.adam.m);
    get_layers(is, ck.adam.v);
    const auto meta_len = get<std::uint32_t>(is);
    if (meta_len > (1u << 20)) throw ConfigError("checkpoint metadata is implausibly long");
    ck.metadata.resize(meta_len);
    is.read(ck.metadata.data(), static_cast<std::streamsize>(meta_len));
    if (!is) throw ConfigError("checkpoint is truncated");
    return ck;
}

} // namespace uavaoi
