#pragma once

#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "pqcnn/rng.hpp"

namespace pqcnn::nn {

enum class Activation { Linear, Sigmoid, Tanh, LeakyRelu };

constexpr double kLeakySlope = 0.01;

const char* activation_name(Activation a);
Activation activation_from_name(const std::string& name);

// A dense layer without bias: out = activation(in * weights).
struct DenseLayer {
    Eigen::MatrixXd weights; // in_dim x out_dim
    Activation activation = Activation::Linear;
};

struct Network {
    std::vector<DenseLayer> layers;

    int input_dim() const { return layers.empty() ? 0 : static_cast<int>(layers.front().weights.rows()); }
    int output_dim() const { return layers.empty() ? 0 : static_cast<int>(layers.back().weights.cols()); }

    // Throws unless consecutive layer dimensions chain.
    void validate() const;
};

// Per-layer pre-activations and activations from a forward pass, kept for
// backpropagation. Rows are batch samples.
struct ForwardCache {
    Eigen::MatrixXd input;
    std::vector<Eigen::MatrixXd> pre;
    std::vector<Eigen::MatrixXd> act;
};

Eigen::MatrixXd forward(std::span<const DenseLayer> layers, const Eigen::MatrixXd& batch,
                        ForwardCache* cache = nullptr);
Eigen::MatrixXd forward(const Network& net, const Eigen::MatrixXd& batch, ForwardCache* cache = nullptr);
Eigen::VectorXd forward(const Network& net, const Eigen::VectorXd& input);

// Evaluation over GF(2): every layer must be linear; the product is rounded
// and reduced mod 2 after each layer. This is how 0/1 code and key matrices
// behave when loaded as weights.
Eigen::VectorXd forward_mod2(std::span<const DenseLayer> layers, const Eigen::VectorXd& input);
Eigen::VectorXd forward_mod2(const Network& net, const Eigen::VectorXd& input);

struct Gradients {
    std::vector<Eigen::MatrixXd> weights; // same shapes as the layer weights
    Eigen::MatrixXd input;                // d loss / d batch input
};

// Reverse-mode gradients for a scalar loss, given d loss / d output for
// every sample in the batch. Weight gradients are summed over the batch;
// fold any 1/batch factor into output_grad.
Gradients backward(std::span<const DenseLayer> layers, const ForwardCache& cache,
                   const Eigen::MatrixXd& output_grad);
Gradients backward(const Network& net, const ForwardCache& cache, const Eigen::MatrixXd& output_grad);

// y' = y + alpha * r with r ~ U[0,1) per component; r is returned so test
// harnesses can check its distribution. Batch rows draw in row order.
std::pair<Eigen::VectorXd, Eigen::VectorXd> noise_inject(const Eigen::VectorXd& y, double alpha, Rng& rng);
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> noise_inject(const Eigen::MatrixXd& batch, double alpha, Rng& rng);

struct GradientDescent {
    double learning_rate = 1e-3;
    void step(Network& net, const std::vector<Eigen::MatrixXd>& grads) const;
};

struct Adam {
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;

    void step(Network& net, const std::vector<Eigen::MatrixXd>& grads);

private:
    std::vector<Eigen::MatrixXd> first_moment_;
    std::vector<Eigen::MatrixXd> second_moment_;
    long step_count_ = 0;
};

struct LossEval {
    double loss = 0.0;
    std::vector<Eigen::MatrixXd> weight_grads;
};

using LossFn = std::function<LossEval(const Network&)>;

// Central finite differences over every weight against the analytic
// gradients from loss_fn. Returns the worst relative error, where each
// component's error is |analytic - numeric| / max(|analytic|, |numeric|,
// 1e-4) -- the floor turns the comparison absolute for near-zero entries.
double gradient_check(const Network& net, const LossFn& loss_fn, double fd_step = 1e-5);

} // namespace pqcnn::nn
