#include "pqcnn/neural_net.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace pqcnn::nn {

namespace {

Eigen::MatrixXd apply_activation(Activation kind, const Eigen::MatrixXd& z) {
    switch (kind) {
    case Activation::Linear:
        return z;
    case Activation::Sigmoid:
        return (1.0 / (1.0 + (-z.array()).exp())).matrix();
    case Activation::Tanh:
        return z.array().tanh().matrix();
    case Activation::LeakyRelu:
        return z.array().max(kLeakySlope * z.array()).matrix();
    }
    throw std::logic_error("unknown activation");
}

// Derivative taken from the cached pre-activation and activation values.
Eigen::MatrixXd activation_derivative(Activation kind, const Eigen::MatrixXd& pre, const Eigen::MatrixXd& act) {
    switch (kind) {
    case Activation::Linear:
        return Eigen::MatrixXd::Ones(pre.rows(), pre.cols());
    case Activation::Sigmoid:
        return (act.array() * (1.0 - act.array())).matrix();
    case Activation::Tanh:
        return (1.0 - act.array().square()).matrix();
    case Activation::LeakyRelu:
        return (pre.array() > 0.0).select(Eigen::MatrixXd::Ones(pre.rows(), pre.cols()),
                                          Eigen::MatrixXd::Constant(pre.rows(), pre.cols(), kLeakySlope));
    }
    throw std::logic_error("unknown activation");
}

} // namespace

const char* activation_name(Activation a) {
    switch (a) {
    case Activation::Linear:
        return "linear";
    case Activation::Sigmoid:
        return "sigmoid";
    case Activation::Tanh:
        return "tanh";
    case Activation::LeakyRelu:
        return "leaky-relu";
    }
    throw std::logic_error("unknown activation");
}

Activation activation_from_name(const std::string& name) {
    if (name == "linear")
        return Activation::Linear;
    if (name == "sigmoid")
        return Activation::Sigmoid;
    if (name == "tanh")
        return Activation::Tanh;
    if (name == "leaky-relu")
        return Activation::LeakyRelu;
    throw std::invalid_argument("unknown activation name: " + name);
}

void Network::validate() const {
    for (std::size_t i = 1; i < layers.size(); ++i)
        if (layers[i - 1].weights.cols() != layers[i].weights.rows())
            throw std::invalid_argument("Network: layer " + std::to_string(i - 1) + " outputs " +
                                        std::to_string(layers[i - 1].weights.cols()) + " values but layer " +
                                        std::to_string(i) + " expects " + std::to_string(layers[i].weights.rows()));
}

Eigen::MatrixXd forward(std::span<const DenseLayer> layers, const Eigen::MatrixXd& batch, ForwardCache* cache) {
    if (layers.empty())
        throw std::invalid_argument("nn::forward: empty layer stack");
    if (batch.cols() != layers.front().weights.rows())
        throw std::invalid_argument("nn::forward: input has " + std::to_string(batch.cols()) +
                                    " features, layer expects " + std::to_string(layers.front().weights.rows()));
    if (cache) {
        cache->input = batch;
        cache->pre.clear();
        cache->act.clear();
        cache->pre.reserve(layers.size());
        cache->act.reserve(layers.size());
    }
    Eigen::MatrixXd current = batch;
    for (const DenseLayer& layer : layers) {
        Eigen::MatrixXd pre = current * layer.weights;
        current = apply_activation(layer.activation, pre);
        if (cache) {
            cache->pre.push_back(std::move(pre));
            cache->act.push_back(current);
        }
    }
    return current;
}

Eigen::MatrixXd forward(const Network& net, const Eigen::MatrixXd& batch, ForwardCache* cache) {
    return forward(std::span<const DenseLayer>(net.layers), batch, cache);
}

Eigen::VectorXd forward(const Network& net, const Eigen::VectorXd& input) {
    return forward(net, Eigen::MatrixXd(input.transpose()), nullptr).row(0).transpose();
}

Eigen::VectorXd forward_mod2(std::span<const DenseLayer> layers, const Eigen::VectorXd& input) {
    Eigen::RowVectorXd current = input.transpose();
    for (const DenseLayer& layer : layers) {
        if (layer.activation != Activation::Linear)
            throw std::invalid_argument("nn::forward_mod2: all layers must be linear");
        if (current.cols() != layer.weights.rows())
            throw std::invalid_argument("nn::forward_mod2: dimension mismatch");
        Eigen::RowVectorXd pre = current * layer.weights;
        for (Eigen::Index j = 0; j < pre.cols(); ++j)
            pre(j) = static_cast<double>(std::llround(pre(j)) & 1);
        current = pre;
    }
    return current.transpose();
}

Eigen::VectorXd forward_mod2(const Network& net, const Eigen::VectorXd& input) {
    return forward_mod2(std::span<const DenseLayer>(net.layers), input);
}

Gradients backward(std::span<const DenseLayer> layers, const ForwardCache& cache,
                   const Eigen::MatrixXd& output_grad) {
    if (cache.pre.size() != layers.size() || cache.act.size() != layers.size())
        throw std::invalid_argument("nn::backward: cache does not match the layer stack");
    if (output_grad.rows() != cache.input.rows() || output_grad.cols() != layers.back().weights.cols())
        throw std::invalid_argument("nn::backward: output gradient shape mismatch");

    Gradients grads;
    grads.weights.resize(layers.size());

    Eigen::MatrixXd delta = output_grad;
    for (int l = static_cast<int>(layers.size()) - 1; l >= 0; --l) {
        const auto idx = static_cast<std::size_t>(l);
        delta = delta.cwiseProduct(activation_derivative(layers[idx].activation, cache.pre[idx], cache.act[idx]));
        const Eigen::MatrixXd& below = (l == 0) ? cache.input : cache.act[idx - 1];
        grads.weights[idx] = below.transpose() * delta;
        delta = (delta * layers[idx].weights.transpose()).eval();
    }
    grads.input = std::move(delta);
    return grads;
}

Gradients backward(const Network& net, const ForwardCache& cache, const Eigen::MatrixXd& output_grad) {
    return backward(std::span<const DenseLayer>(net.layers), cache, output_grad);
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> noise_inject(const Eigen::VectorXd& y, double alpha, Rng& rng) {
    if (alpha < 0.0)
        throw std::invalid_argument("nn::noise_inject: alpha must be nonnegative");
    Eigen::VectorXd r(y.size());
    for (Eigen::Index i = 0; i < y.size(); ++i)
        r(i) = rng.next_real();
    return {y + alpha * r, r};
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> noise_inject(const Eigen::MatrixXd& batch, double alpha, Rng& rng) {
    if (alpha < 0.0)
        throw std::invalid_argument("nn::noise_inject: alpha must be nonnegative");
    Eigen::MatrixXd r(batch.rows(), batch.cols());
    for (Eigen::Index i = 0; i < batch.rows(); ++i)
        for (Eigen::Index j = 0; j < batch.cols(); ++j)
            r(i, j) = rng.next_real();
    return {batch + alpha * r, r};
}

void GradientDescent::step(Network& net, const std::vector<Eigen::MatrixXd>& grads) const {
    if (grads.size() != net.layers.size())
        throw std::invalid_argument("GradientDescent::step: gradient count mismatch");
    for (std::size_t l = 0; l < grads.size(); ++l) {
        if (grads[l].rows() != net.layers[l].weights.rows() || grads[l].cols() != net.layers[l].weights.cols())
            throw std::invalid_argument("GradientDescent::step: gradient shape mismatch");
        net.layers[l].weights -= learning_rate * grads[l];
    }
}

void Adam::step(Network& net, const std::vector<Eigen::MatrixXd>& grads) {
    if (grads.size() != net.layers.size())
        throw std::invalid_argument("Adam::step: gradient count mismatch");
    if (first_moment_.empty()) {
        first_moment_.reserve(grads.size());
        second_moment_.reserve(grads.size());
        for (const auto& g : grads) {
            first_moment_.push_back(Eigen::MatrixXd::Zero(g.rows(), g.cols()));
            second_moment_.push_back(Eigen::MatrixXd::Zero(g.rows(), g.cols()));
        }
    }
    ++step_count_;
    const double bias1 = 1.0 - std::pow(beta1, static_cast<double>(step_count_));
    const double bias2 = 1.0 - std::pow(beta2, static_cast<double>(step_count_));
    for (std::size_t l = 0; l < grads.size(); ++l) {
        if (grads[l].rows() != net.layers[l].weights.rows() || grads[l].cols() != net.layers[l].weights.cols())
            throw std::invalid_argument("Adam::step: gradient shape mismatch");
        first_moment_[l] = beta1 * first_moment_[l] + (1.0 - beta1) * grads[l];
        second_moment_[l] = beta2 * second_moment_[l] + (1.0 - beta2) * grads[l].cwiseProduct(grads[l]);
        const Eigen::ArrayXXd m_hat = first_moment_[l].array() / bias1;
        const Eigen::ArrayXXd v_hat = second_moment_[l].array() / bias2;
        net.layers[l].weights.array() -= learning_rate * m_hat / (v_hat.sqrt() + epsilon);
    }
}

double gradient_check(const Network& net, const LossFn& loss_fn, double fd_step) {
    const LossEval analytic = loss_fn(net);
    if (analytic.weight_grads.size() != net.layers.size())
        throw std::invalid_argument("nn::gradient_check: loss_fn returned wrong gradient count");

    Network probe = net;
    double worst = 0.0;
    for (std::size_t l = 0; l < probe.layers.size(); ++l) {
        Eigen::MatrixXd& w = probe.layers[l].weights;
        for (Eigen::Index r = 0; r < w.rows(); ++r) {
            for (Eigen::Index c = 0; c < w.cols(); ++c) {
                const double saved = w(r, c);
                w(r, c) = saved + fd_step;
                const double up = loss_fn(probe).loss;
                w(r, c) = saved - fd_step;
                const double down = loss_fn(probe).loss;
                w(r, c) = saved;
                const double numeric = (up - down) / (2.0 * fd_step);
                const double exact = analytic.weight_grads[l](r, c);
                const double scale = std::max({std::abs(exact), std::abs(numeric), 1e-4});
                worst = std::max(worst, std::abs(exact - numeric) / scale);
            }
        }
    }
    return worst;
}

} // namespace pqcnn::nn
