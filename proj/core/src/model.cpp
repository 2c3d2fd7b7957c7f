#include "pqcnn/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace pqcnn::model {

namespace {

std::array<int, 7> layer_dims(const PqcnnConfig& cfg) {
    const int c = cfg.plaintext_dim;
    const int n = cfg.ciphertext_dim;
    return {c, c, n, n, n, c, c};
}

std::span<const nn::DenseLayer> encrypt_stack(const nn::Network& net) {
    return std::span<const nn::DenseLayer>(net.layers).subspan(0, 3);
}

std::span<const nn::DenseLayer> decrypt_stack(const nn::Network& net) {
    return std::span<const nn::DenseLayer>(net.layers).subspan(3, 3);
}

double theta_hard(const Eigen::VectorXd& values, int bins) {
    return unistat::uniformity_report(std::span<const double>(values.data(), static_cast<std::size_t>(values.size())),
                                      bins)
        .theta;
}

double mean_squared_error(const Eigen::MatrixXd& output, const Eigen::MatrixXd& target) {
    return (output - target).squaredNorm() / static_cast<double>(output.rows() * output.cols());
}

void require_dataset(const PqcnnConfig& cfg, const dataio::Dataset& data) {
    if (data.sample_count() == 0)
        throw std::invalid_argument("pqcnn::train: empty dataset");
    if (data.feature_count() != cfg.plaintext_dim)
        throw std::invalid_argument("pqcnn: dataset has " + std::to_string(data.feature_count()) +
                                    " features but the model expects plaintext_dim = " +
                                    std::to_string(cfg.plaintext_dim));
}

} // namespace

void PqcnnConfig::validate() const {
    if (plaintext_dim < 2 || ciphertext_dim < 2)
        throw std::invalid_argument("PqcnnConfig: plaintext and ciphertext dims must be at least 2");
    if (bins < 2 || bins >= ciphertext_dim)
        throw std::invalid_argument("PqcnnConfig: bin count must satisfy 2 <= bins < ciphertext_dim");
    if (alpha < 0.0)
        throw std::invalid_argument("PqcnnConfig: alpha must be nonnegative");
    if (epochs < 1 || batch_size < 1)
        throw std::invalid_argument("PqcnnConfig: epochs and batch size must be positive");
    if (!(learning_rate > 0.0) || !(bandwidth > 0.0))
        throw std::invalid_argument("PqcnnConfig: learning rate and bandwidth must be positive");
    if (theta_weight < 0.0)
        throw std::invalid_argument("PqcnnConfig: theta weight must be nonnegative");
    if (validation_fraction < 0.0 || validation_fraction >= 1.0)
        throw std::invalid_argument("PqcnnConfig: validation fraction must lie in [0,1)");
}

nn::Network build(const PqcnnConfig& config, Rng& rng) {
    config.validate();
    const auto dims = layer_dims(config);
    nn::Network net;
    net.layers.reserve(6);
    for (int l = 0; l < 6; ++l) {
        const int in = dims[static_cast<std::size_t>(l)];
        const int out = dims[static_cast<std::size_t>(l) + 1];
        const double limit = std::sqrt(6.0 / (in + out));
        nn::DenseLayer layer;
        layer.activation = config.activations[static_cast<std::size_t>(l)];
        layer.weights.resize(in, out);
        for (int i = 0; i < in; ++i)
            for (int j = 0; j < out; ++j)
                layer.weights(i, j) = rng.next_symmetric(limit);
        net.layers.push_back(std::move(layer));
    }
    net.validate();
    return net;
}

LossParts composite_loss(const Eigen::VectorXd& output, const Eigen::VectorXd& input,
                         const Eigen::VectorXd& y_prime, const PqcnnConfig& config, ThetaMode mode) {
    if (output.size() != input.size() || output.size() != config.plaintext_dim)
        throw std::invalid_argument("composite_loss: plaintext dimension mismatch");
    if (y_prime.size() != config.ciphertext_dim)
        throw std::invalid_argument("composite_loss: ciphertext dimension mismatch");

    LossParts parts;
    parts.mse = (output - input).squaredNorm() / static_cast<double>(config.plaintext_dim);
    const std::span<const double> yp(y_prime.data(), static_cast<std::size_t>(y_prime.size()));
    if (mode == ThetaMode::Soft)
        parts.theta = unistat::theta_soft_with_grad(yp, config.bins, config.bandwidth).theta;
    else
        parts.theta = unistat::uniformity_report(yp, config.bins).theta;
    parts.total = config.theta_weight * parts.theta + parts.mse;
    return parts;
}

namespace {

struct BatchEval {
    double loss = 0.0;
    double mse = 0.0;
    double theta = 0.0;
    std::vector<Eigen::MatrixXd> grads; // encrypt stack then decrypt stack
};

// Forward, noise, loss, and the full backward pass for one batch. The
// gradient arriving at the ciphertext layer is the sum of the
// reconstruction path back through the decrypt stack and the uniformity
// term taken directly on y'.
BatchEval eval_batch(const nn::Network& net, const Eigen::MatrixXd& X, const Eigen::MatrixXd& noise,
                     const PqcnnConfig& cfg, bool want_grads) {
    const auto B = X.rows();
    const double inv_b = 1.0 / static_cast<double>(B);

    nn::ForwardCache enc_cache;
    nn::ForwardCache dec_cache;
    const Eigen::MatrixXd Y = nn::forward(encrypt_stack(net), X, want_grads ? &enc_cache : nullptr);
    const Eigen::MatrixXd Yp = Y + cfg.alpha * noise;
    const Eigen::MatrixXd O = nn::forward(decrypt_stack(net), Yp, want_grads ? &dec_cache : nullptr);

    BatchEval eval;
    eval.mse = (O - X).squaredNorm() / static_cast<double>(B * cfg.plaintext_dim);

    std::vector<Eigen::VectorXd> theta_grads;
    if (want_grads)
        theta_grads.resize(static_cast<std::size_t>(B));
    for (Eigen::Index b = 0; b < B; ++b) {
        const Eigen::VectorXd row = Yp.row(b).transpose();
        const std::span<const double> yp(row.data(), static_cast<std::size_t>(row.size()));
        const auto theta = unistat::theta_soft_with_grad(yp, cfg.bins, cfg.bandwidth);
        eval.theta += theta.theta * inv_b;
        if (want_grads)
            theta_grads[static_cast<std::size_t>(b)] =
                Eigen::Map<const Eigen::VectorXd>(theta.gradient.data(), static_cast<Eigen::Index>(theta.gradient.size()));
    }
    eval.loss = cfg.theta_weight * eval.theta + eval.mse;

    if (want_grads) {
        const Eigen::MatrixXd output_grad = (2.0 * inv_b / cfg.plaintext_dim) * (O - X);
        nn::Gradients dec = nn::backward(decrypt_stack(net), dec_cache, output_grad);
        Eigen::MatrixXd ciphertext_grad = std::move(dec.input);
        for (Eigen::Index b = 0; b < B; ++b)
            ciphertext_grad.row(b) += (cfg.theta_weight * inv_b) * theta_grads[static_cast<std::size_t>(b)].transpose();
        nn::Gradients enc = nn::backward(encrypt_stack(net), enc_cache, ciphertext_grad);

        eval.grads.reserve(6);
        for (auto& g : enc.weights)
            eval.grads.push_back(std::move(g));
        for (auto& g : dec.weights)
            eval.grads.push_back(std::move(g));
    }
    return eval;
}

} // namespace

nn::LossEval sample_loss_eval(const nn::Network& net, const Eigen::VectorXd& input,
                              const Eigen::VectorXd& noise, const PqcnnConfig& config) {
    if (input.size() != config.plaintext_dim || noise.size() != config.ciphertext_dim)
        throw std::invalid_argument("sample_loss_eval: input or noise dimension mismatch");
    const BatchEval eval =
        eval_batch(net, input.transpose(), noise.transpose(), config, true);
    return nn::LossEval{eval.loss, eval.grads};
}

TrainResult train(const PqcnnConfig& config, const dataio::Dataset& data) {
    config.validate();
    require_dataset(config, data);

    Rng rng(config.seed);
    Rng eval_rng(config.seed ^ 0x9e3779b97f4a7c15ull); // separate stream for validation noise

    nn::Network net = build(config, rng);

    // Deterministic shuffled split.
    const int total = data.sample_count();
    std::vector<int> order(static_cast<std::size_t>(total));
    std::iota(order.begin(), order.end(), 0);
    for (int i = total - 1; i > 0; --i) {
        const auto j = static_cast<int>(rng.next_index(static_cast<std::uint64_t>(i) + 1));
        std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
    }
    int val_count = 0;
    if (total >= 2) {
        val_count = static_cast<int>(std::lround(config.validation_fraction * total));
        val_count = std::clamp(val_count, 1, total - 1);
    }
    const int train_count = total - val_count;

    Eigen::MatrixXd train_x(train_count, config.plaintext_dim);
    for (int i = 0; i < train_count; ++i)
        train_x.row(i) = data.values.row(order[static_cast<std::size_t>(i)]);
    Eigen::MatrixXd val_x(std::max(val_count, 1), config.plaintext_dim);
    if (val_count == 0)
        val_x.row(0) = data.values.row(0); // single-sample dataset: validate on it
    else
        for (int i = 0; i < val_count; ++i)
            val_x.row(i) = data.values.row(order[static_cast<std::size_t>(train_count + i)]);

    nn::Adam optimizer;
    optimizer.learning_rate = config.learning_rate;
    std::vector<int> batch_order(static_cast<std::size_t>(train_count));
    std::iota(batch_order.begin(), batch_order.end(), 0);

    TrainResult result;
    result.config = config;
    result.history.reserve(static_cast<std::size_t>(config.epochs));

    double best_val_loss = std::numeric_limits<double>::infinity();
    nn::Network best_net = net;
    double best_mse = 0.0;
    double best_theta = 0.0;

    for (int epoch = 1; epoch <= config.epochs; ++epoch) {
        for (int i = train_count - 1; i > 0; --i) {
            const auto j = static_cast<int>(rng.next_index(static_cast<std::uint64_t>(i) + 1));
            std::swap(batch_order[static_cast<std::size_t>(i)], batch_order[static_cast<std::size_t>(j)]);
        }

        EpochStats stats;
        stats.epoch = epoch;
        int batches = 0;
        for (int start = 0; start < train_count; start += config.batch_size) {
            const int count = std::min(config.batch_size, train_count - start);
            Eigen::MatrixXd X(count, config.plaintext_dim);
            for (int i = 0; i < count; ++i)
                X.row(i) = train_x.row(batch_order[static_cast<std::size_t>(start + i)]);
            Eigen::MatrixXd noise(count, config.ciphertext_dim);
            for (int i = 0; i < count; ++i)
                for (int j = 0; j < config.ciphertext_dim; ++j)
                    noise(i, j) = rng.next_real();

            const BatchEval eval = eval_batch(net, X, noise, config, true);
            optimizer.step(net, eval.grads);

            stats.train_loss += eval.loss;
            stats.train_mse += eval.mse;
            stats.train_theta += eval.theta;
            ++batches;
        }
        stats.train_loss /= batches;
        stats.train_mse /= batches;
        stats.train_theta /= batches;

        // Validation pass with fresh noise, hard-histogram theta.
        Eigen::MatrixXd val_noise(val_x.rows(), config.ciphertext_dim);
        for (Eigen::Index i = 0; i < val_noise.rows(); ++i)
            for (int j = 0; j < config.ciphertext_dim; ++j)
                val_noise(i, j) = eval_rng.next_real();
        const Eigen::MatrixXd val_y = nn::forward(encrypt_stack(net), val_x, nullptr);
        const Eigen::MatrixXd val_yp = val_y + config.alpha * val_noise;
        const Eigen::MatrixXd val_o = nn::forward(decrypt_stack(net), val_yp, nullptr);
        stats.val_mse = mean_squared_error(val_o, val_x);
        for (Eigen::Index b = 0; b < val_yp.rows(); ++b)
            stats.val_theta += theta_hard(val_yp.row(b).transpose(), config.bins) / static_cast<double>(val_yp.rows());
        stats.val_loss = config.theta_weight * stats.val_theta + stats.val_mse;

        if (stats.val_loss < best_val_loss) {
            best_val_loss = stats.val_loss;
            best_net = net;
            best_mse = stats.val_mse;
            best_theta = stats.val_theta;
        }
        stats.best_val_loss = best_val_loss;
        result.history.push_back(stats);
    }

    result.net = std::move(best_net);
    result.validation_loss = best_val_loss;
    result.validation_mse = best_mse;
    result.validation_theta = best_theta;
    result.validation_set.values = val_x;
    result.validation_set.provenance = data.provenance + " (validation split)";
    return result;
}

KeyPair split_keys(const nn::Network& net, const PqcnnConfig& config) {
    if (net.layers.size() != 6)
        throw std::invalid_argument("split_keys: expected a 6-layer network");
    KeyPair keys;
    keys.encrypt_key.plaintext_dim = config.plaintext_dim;
    keys.encrypt_key.ciphertext_dim = config.ciphertext_dim;
    keys.encrypt_key.bins = config.bins;
    keys.encrypt_key.alpha = config.alpha;
    keys.encrypt_key.layers.assign(net.layers.begin(), net.layers.begin() + 3);

    keys.decrypt_key.plaintext_dim = config.plaintext_dim;
    keys.decrypt_key.ciphertext_dim = config.ciphertext_dim;
    keys.decrypt_key.bins = config.bins;
    keys.decrypt_key.alpha = config.alpha;
    keys.decrypt_key.layers.assign(net.layers.begin() + 3, net.layers.end());
    return keys;
}

EncryptResult encrypt(const EncryptKey& key, const Eigen::VectorXd& plaintext, Rng& rng) {
    if (plaintext.size() != key.plaintext_dim)
        throw std::invalid_argument("pqcnn::encrypt: expected plaintext of dimension " +
                                    std::to_string(key.plaintext_dim));
    const Eigen::MatrixXd y = nn::forward(std::span<const nn::DenseLayer>(key.layers),
                                          Eigen::MatrixXd(plaintext.transpose()), nullptr);
    auto [yp, r] = nn::noise_inject(Eigen::VectorXd(y.row(0).transpose()), key.alpha, rng);
    return EncryptResult{std::move(yp), std::move(r)};
}

Eigen::VectorXd decrypt(const DecryptKey& key, const Eigen::VectorXd& y_prime) {
    if (y_prime.size() != key.ciphertext_dim)
        throw std::invalid_argument("pqcnn::decrypt: expected ciphertext of dimension " +
                                    std::to_string(key.ciphertext_dim));
    return nn::forward(std::span<const nn::DenseLayer>(key.layers), Eigen::MatrixXd(y_prime.transpose()), nullptr)
        .row(0)
        .transpose();
}

SweepRow evaluate(const nn::Network& net, const dataio::Dataset& data, const PqcnnConfig& config, Rng& rng) {
    require_dataset(config, data);
    const int count = data.sample_count();
    SweepRow row;
    row.alpha = config.alpha;
    for (int i = 0; i < count; ++i) {
        const Eigen::VectorXd x = data.values.row(i).transpose();
        const Eigen::MatrixXd y = nn::forward(encrypt_stack(net), Eigen::MatrixXd(x.transpose()), nullptr);
        auto [yp, r] = nn::noise_inject(Eigen::VectorXd(y.row(0).transpose()), config.alpha, rng);
        const Eigen::VectorXd o =
            nn::forward(decrypt_stack(net), Eigen::MatrixXd(yp.transpose()), nullptr).row(0).transpose();

        row.mse += (o - x).squaredNorm() / static_cast<double>(config.plaintext_dim);
        const Eigen::VectorXd scaled_noise = config.alpha * r;
        row.theta_noise += theta_hard(scaled_noise, config.bins);
        row.theta_ciphertext += theta_hard(yp, config.bins);
    }
    row.mse /= count;
    row.theta_noise /= count;
    row.theta_ciphertext /= count;
    return row;
}

std::vector<SweepRow> alpha_sweep(const PqcnnConfig& config, const dataio::Dataset& data,
                                  const std::vector<double>& alphas) {
    if (alphas.empty())
        throw std::invalid_argument("alpha_sweep: need at least one alpha");
    std::vector<double> sorted = alphas;
    std::sort(sorted.begin(), sorted.end());

    std::vector<SweepRow> rows;
    rows.reserve(sorted.size());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        PqcnnConfig cfg = config;
        cfg.alpha = sorted[i];
        cfg.seed = config.seed + i;
        const TrainResult trained = train(cfg, data);
        Rng eval_rng(cfg.seed ^ 0xda3e39cb94b95bdbull);
        rows.push_back(evaluate(trained.net, trained.validation_set, cfg, eval_rng));
    }
    return rows;
}

Eigen::MatrixXd to_real(const BitMatrix& bits) {
    Eigen::MatrixXd out(bits.rows(), bits.cols());
    for (int i = 0; i < bits.rows(); ++i)
        for (int j = 0; j < bits.cols(); ++j)
            out(i, j) = static_cast<double>(bits(i, j));
    return out;
}

nn::Network hamming_network(const hamming::HammingCode& code) {
    nn::Network net;
    net.layers.push_back({to_real(code.generator), nn::Activation::Linear});
    net.layers.push_back({to_real(code.decode_map), nn::Activation::Linear});
    net.validate();
    return net;
}

nn::Network mceliece_network(const mceliece::KeyPair& keys) {
    const auto& sk = keys.private_key;
    nn::Network net;
    net.layers.push_back({to_real(sk.scrambler), nn::Activation::Linear});
    net.layers.push_back({to_real(sk.code.generator), nn::Activation::Linear});
    net.layers.push_back({to_real(sk.permutation), nn::Activation::Linear});
    net.layers.push_back({to_real(sk.permutation_inv), nn::Activation::Linear});
    net.layers.push_back({to_real(sk.code.decode_map), nn::Activation::Linear});
    net.layers.push_back({to_real(sk.scrambler_inv), nn::Activation::Linear});
    net.validate();
    return net;
}

} // namespace pqcnn::model
