#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "pqcnn/dataio.hpp"
#include "pqcnn/hamming.hpp"
#include "pqcnn/mceliece.hpp"
#include "pqcnn/neural_net.hpp"
#include "pqcnn/unistat.hpp"

namespace pqcnn::model {

// The autoencoder cipher: six dense layers shaped like the McEliece factor
// chain (c->c->n->n for encryption, n->n->c->c for decryption), uniform
// noise injected at the ciphertext layer, and a loss that adds the
// chi-squared CDF of the ciphertext histogram to the reconstruction error.
// The first three weight matrices act as the public key, the last three as
// the private key.

struct PqcnnConfig {
    int plaintext_dim = 4;  // c
    int ciphertext_dim = 7; // n
    int bins = 4;           // m, must stay below ciphertext_dim
    double alpha = 0.4;     // noise weight

    std::array<nn::Activation, 6> activations{nn::Activation::Tanh,    nn::Activation::Tanh,
                                              nn::Activation::Sigmoid, nn::Activation::Tanh,
                                              nn::Activation::Tanh,    nn::Activation::Linear};

    int epochs = 500;
    int batch_size = 32;
    double learning_rate = 1e-3;
    double bandwidth = 0.05;    // soft-histogram kernel width
    double theta_weight = 1.0;  // 1 keeps the loss exactly theta + mse
    double validation_fraction = 0.1;
    std::uint64_t seed = 0;

    void validate() const;
};

// Six layers with the configured activations, weights drawn from a
// symmetric uniform distribution scaled per layer fan (Glorot).
nn::Network build(const PqcnnConfig& config, Rng& rng);

enum class ThetaMode { Soft, Hard }; // soft while training, hard for reports

struct LossParts {
    double total = 0.0;
    double mse = 0.0;
    double theta = 0.0;
};

LossParts composite_loss(const Eigen::VectorXd& output, const Eigen::VectorXd& input,
                         const Eigen::VectorXd& y_prime, const PqcnnConfig& config, ThetaMode mode);

// Training loss and analytic weight gradients for a single sample with the
// noise draw held fixed, which makes the whole mapping deterministic and
// finite-difference checkable via nn::gradient_check.
nn::LossEval sample_loss_eval(const nn::Network& net, const Eigen::VectorXd& input,
                              const Eigen::VectorXd& noise, const PqcnnConfig& config);

struct EpochStats {
    int epoch = 0;
    double train_loss = 0.0;
    double train_mse = 0.0;
    double train_theta = 0.0;
    double val_loss = 0.0;
    double val_mse = 0.0;
    double val_theta = 0.0;
    double best_val_loss = 0.0; // running minimum, never increases
};

struct TrainResult {
    nn::Network net; // best-validation weights
    PqcnnConfig config;
    std::vector<EpochStats> history;
    double validation_loss = 0.0;
    double validation_mse = 0.0;
    double validation_theta = 0.0;
    dataio::Dataset validation_set;
};

TrainResult train(const PqcnnConfig& config, const dataio::Dataset& data);

// Key material: the three encrypt-stack matrices with the noise weight, and
// the three decrypt-stack matrices. An encrypt key carries nothing of the
// decrypt stack, and vice versa.
struct EncryptKey {
    int plaintext_dim = 0;
    int ciphertext_dim = 0;
    int bins = 0;
    double alpha = 0.0;
    std::vector<nn::DenseLayer> layers; // c->c->n->n
};

struct DecryptKey {
    int plaintext_dim = 0;
    int ciphertext_dim = 0;
    int bins = 0;
    double alpha = 0.0; // echoed for bookkeeping; decryption ignores it
    std::vector<nn::DenseLayer> layers; // n->n->c->c
};

struct KeyPair {
    EncryptKey encrypt_key;
    DecryptKey decrypt_key;
};

KeyPair split_keys(const nn::Network& net, const PqcnnConfig& config);

struct EncryptResult {
    Eigen::VectorXd y_prime;
    Eigen::VectorXd noise; // the raw uniform draw r
};

EncryptResult encrypt(const EncryptKey& key, const Eigen::VectorXd& plaintext, Rng& rng);
Eigen::VectorXd decrypt(const DecryptKey& key, const Eigen::VectorXd& y_prime);

struct SweepRow {
    double alpha = 0.0;
    double mse = 0.0;
    double theta_noise = 0.0;      // theta of the scaled noise alpha * r
    double theta_ciphertext = 0.0; // theta of y'
};

// Fresh noise per sample; thetas use the hard histogram and are averaged
// over the dataset, as is the per-component reconstruction error.
SweepRow evaluate(const nn::Network& net, const dataio::Dataset& data, const PqcnnConfig& config, Rng& rng);

// Trains one model per alpha (the noise level moves the optimum), each on a
// seed derived as config.seed + alpha index, and evaluates it on its
// validation split. Rows come back ordered by alpha.
std::vector<SweepRow> alpha_sweep(const PqcnnConfig& config, const dataio::Dataset& data,
                                  const std::vector<double>& alphas);

// Fixed-weight reference networks: the code matrices loaded directly as
// linear layers. Under forward_mod2 they reproduce the exact arithmetic of
// the corresponding cipher.
Eigen::MatrixXd to_real(const BitMatrix& bits);
nn::Network hamming_network(const hamming::HammingCode& code);      // G then decode map
nn::Network mceliece_network(const mceliece::KeyPair& keys);        // S,G,P then P^-1,R,S^-1

} // namespace pqcnn::model
