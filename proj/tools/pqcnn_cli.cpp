// Command-line front end: worked-example demo, Hamming/McEliece codec
// commands, autoencoder-cipher training, encryption, evaluation, the alpha
// sweep, and a uniformity tester. Exit codes: 0 success, 1 runtime failure,
// 2 usage error.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "pqcnn/dataio.hpp"
#include "pqcnn/hamming.hpp"
#include "pqcnn/key_io.hpp"
#include "pqcnn/mceliece.hpp"
#include "pqcnn/model.hpp"
#include "pqcnn/unistat.hpp"

using namespace pqcnn;

namespace {

constexpr const char* kToyWarning =
    "warning: toy cipher -- not secure at these parameters; for study and experiment only\n";

void warn_toy_cipher() {
    std::cerr << kToyWarning;
}

void ensure_writable(const std::filesystem::path& path, bool force) {
    if (!force && std::filesystem::exists(path))
        throw std::runtime_error("refusing to overwrite " + path.string() + " (pass --force to allow)");
}

BitVector parse_bits(const std::string& text) {
    BitVector bits;
    bits.reserve(text.size());
    for (char ch : text) {
        if (ch != '0' && ch != '1')
            throw std::runtime_error("bit strings may only contain 0 and 1, got '" + std::string(1, ch) + "'");
        bits.push_back(static_cast<std::uint8_t>(ch - '0'));
    }
    if (bits.empty())
        throw std::runtime_error("empty bit string");
    return bits;
}

std::string bits_to_string(const BitVector& bits) {
    std::string out;
    for (auto b : bits)
        out += b ? '1' : '0';
    return out;
}

std::vector<double> read_numbers(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot read " + path.string());
    std::vector<double> values;
    std::string token;
    while (in >> token) {
        // commas are as good as whitespace here
        std::replace(token.begin(), token.end(), ',', ' ');
        std::istringstream ts(token);
        double v;
        while (ts >> v)
            values.push_back(v);
    }
    return values;
}

std::string format_double(double v, const char* fmt = "%.10g") {
    char buf[64];
    std::snprintf(buf, sizeof(buf), fmt, v);
    return buf;
}

std::vector<double> parse_alpha_spec(const std::string& spec) {
    std::vector<double> alphas;
    if (spec.find(':') != std::string::npos) {
        double start = 0.0;
        double end = 0.0;
        double step = 0.0;
        char c1 = 0;
        char c2 = 0;
        std::istringstream ss(spec);
        if (!(ss >> start >> c1 >> end >> c2 >> step) || c1 != ':' || c2 != ':' || step <= 0.0)
            throw std::runtime_error("bad alpha range '" + spec + "', expected start:end:step");
        for (int i = 0;; ++i) {
            const double value = start + i * step;
            if (value > end + 1e-9)
                break;
            alphas.push_back(value);
        }
    } else {
        std::string token;
        std::istringstream ss(spec);
        while (std::getline(ss, token, ',')) {
            if (token.empty())
                continue;
            alphas.push_back(std::stod(token));
        }
    }
    if (alphas.empty())
        throw std::runtime_error("alpha list '" + spec + "' is empty");
    return alphas;
}

dataio::Dataset load_dataset(const std::string& source, int samples, int features, bool has_header,
                             std::uint64_t seed) {
    if (source == "synthetic") {
        Rng rng(seed);
        return dataio::synthetic_cellular(samples, features, rng);
    }
    return dataio::load_csv(source, has_header);
}

// ---------------------------------------------------------------------------
// demo: the fixed (7,4) worked example, self-checked against built-in values.

struct DemoStep {
    std::string label;
    std::string actual;
    std::string expected;
};

int cmd_demo() {
    const auto code = hamming::standard_7_4();
    const BitMatrix scrambler = BitMatrix::from_rows({{1, 1, 0, 1}, {1, 0, 0, 1}, {0, 1, 1, 1}, {1, 1, 0, 0}});
    const BitMatrix permutation = BitMatrix::from_rows({{0, 1, 0, 0, 0, 0, 0},
                                                        {0, 0, 0, 1, 0, 0, 0},
                                                        {0, 0, 0, 0, 0, 0, 1},
                                                        {1, 0, 0, 0, 0, 0, 0},
                                                        {0, 0, 1, 0, 0, 0, 0},
                                                        {0, 0, 0, 0, 0, 1, 0},
                                                        {0, 0, 0, 0, 1, 0, 0}});
    const BitVector message{1, 0, 0, 0};

    std::vector<DemoStep> steps;
    const auto record = [&steps](std::string label, std::string actual, std::string expected) {
        steps.push_back({std::move(label), std::move(actual), std::move(expected)});
    };

    const BitVector codeword = hamming::encode(code, message);
    record("encode " + to_string(message), to_string(codeword), "[1 1 1 0 0 0 0]");
    record("decode " + to_string(codeword), to_string(hamming::decode(code, codeword)), "[1 0 0 0]");

    const BitVector noise{0, 0, 0, 0, 0, 0, 1};
    const BitVector noisy = add(codeword, noise);
    record("with noise " + to_string(noise), to_string(noisy), "[1 1 1 0 0 0 1]");
    record("syndrome", to_string(hamming::syndrome(code, noisy)), "[1 1 1]");
    const auto fixed = hamming::correct(code, noisy);
    record("corrected position", fixed.error_position ? "position " + std::to_string(*fixed.error_position)
                                                      : "none",
           "position 7");
    record("corrected word", to_string(fixed.corrected), "[1 1 1 0 0 0 0]");

    const auto keys = mceliece::assemble(code, scrambler, permutation);
    const std::string public_rows = "[0 1 1 0 1 0 1] [1 0 0 0 1 0 1] [1 0 1 0 1 1 0] [1 0 1 1 0 0 1]";
    std::string actual_rows;
    for (int i = 0; i < 4; ++i) {
        if (i)
            actual_rows += ' ';
        actual_rows += to_string(keys.public_key.encryption_matrix.row(i));
    }
    record("public key rows", actual_rows, public_rows);

    Rng rng(0);
    const auto ct = mceliece::encrypt(keys.public_key, message, rng, 0);
    record("encrypt " + to_string(message), to_string(ct.y), "[0 1 1 0 1 0 1]");

    const auto trace = mceliece::decrypt_trace(keys.private_key, ct);
    record("after permutation inverse", to_string(trace.after_permutation_inv), "[1 0 1 0 1 0 1]");
    record("after decode map", to_string(trace.after_decode), "[1 1 0 1]");
    record("after scrambler inverse", to_string(trace.message), "[1 0 0 0]");

    bool all_good = true;
    for (const auto& step : steps) {
        const bool good = step.actual == step.expected;
        all_good = all_good && good;
        std::cout << step.label << ": " << step.actual;
        if (!good)
            std::cout << "   MISMATCH, expected " << step.expected;
        std::cout << '\n';
    }
    if (!all_good) {
        std::cerr << "error: demo output deviates from the built-in expected values\n";
        return 1;
    }
    std::cout << "all " << steps.size() << " demo values check out\n";
    return 0;
}

// ---------------------------------------------------------------------------

struct HammingOpts {
    std::string message;
    int parity_bits = 3;
    int flip = 0;
};

int cmd_hamming_roundtrip(const HammingOpts& opts) {
    const auto code = hamming::construct(opts.parity_bits);
    const BitVector message = parse_bits(opts.message);
    if (static_cast<int>(message.size()) != code.k)
        throw std::runtime_error("message must have " + std::to_string(code.k) + " bits for a (" +
                                 std::to_string(code.n) + "," + std::to_string(code.k) + ") code");
    if (opts.flip < 0 || opts.flip > code.n)
        throw std::runtime_error("flip position must lie in 1.." + std::to_string(code.n) + " (0 for none)");

    BitVector word = hamming::encode(code, message);
    std::cout << "codeword: " << to_string(word) << '\n';
    if (opts.flip > 0) {
        word[static_cast<std::size_t>(opts.flip - 1)] ^= 1;
        std::cout << "received: " << to_string(word) << " (bit " << opts.flip << " flipped)\n";
    }
    std::cout << "syndrome: " << to_string(hamming::syndrome(code, word)) << '\n';
    const auto fixed = hamming::correct(code, word);
    if (fixed.error_position)
        std::cout << "corrected position " << *fixed.error_position << '\n';
    else
        std::cout << "no error detected\n";
    const BitVector decoded = hamming::decode(code, fixed.corrected);
    std::cout << "decoded:  " << to_string(decoded) << '\n';
    if (decoded != message)
        throw std::runtime_error("roundtrip failed to recover the message");
    return 0;
}

struct McelieceKeygenOpts {
    std::uint64_t seed = 0;
    int parity_bits = 3;
    std::string public_out;
    std::string private_out;
    bool force = false;
};

int cmd_mceliece_keygen(const McelieceKeygenOpts& opts) {
    warn_toy_cipher();
    ensure_writable(opts.public_out, opts.force);
    ensure_writable(opts.private_out, opts.force);
    const auto code = hamming::construct(opts.parity_bits);
    Rng rng(opts.seed);
    const auto keys = mceliece::keygen(code, rng);
    keyio::save(opts.public_out, keys.public_key);
    keyio::save(opts.private_out, keys.private_key);
    std::cout << "wrote " << opts.public_out << " (k=" << code.k << ", n=" << code.n << ") and "
              << opts.private_out << '\n';
    return 0;
}

struct McelieceEncryptOpts {
    std::string key_path;
    std::string message;
    std::uint64_t seed = 0;
    int error_weight = 1;
    std::string out;
    bool force = false;
};

int cmd_mceliece_encrypt(const McelieceEncryptOpts& opts) {
    warn_toy_cipher();
    const auto key = keyio::load_mceliece_public(opts.key_path);
    Rng rng(opts.seed);
    const auto ct = mceliece::encrypt(key, parse_bits(opts.message), rng, opts.error_weight);
    const std::string text = bits_to_string(ct.y);
    if (opts.out.empty()) {
        std::cout << text << '\n';
    } else {
        ensure_writable(opts.out, opts.force);
        std::ofstream file(opts.out, std::ios::binary);
        if (!file)
            throw std::runtime_error("cannot write " + opts.out);
        file << text << '\n';
        std::cout << "wrote " << opts.out << '\n';
    }
    return 0;
}

struct McelieceDecryptOpts {
    std::string key_path;
    std::string ciphertext;
    std::string in;
};

int cmd_mceliece_decrypt(const McelieceDecryptOpts& opts) {
    warn_toy_cipher();
    if (opts.ciphertext.empty() && opts.in.empty())
        throw std::runtime_error("provide a ciphertext with --ciphertext or --in");
    const auto key = keyio::load_mceliece_private(opts.key_path);
    std::string text = opts.ciphertext;
    if (!opts.in.empty()) {
        std::ifstream file(opts.in);
        if (!(file >> text))
            throw std::runtime_error("cannot read ciphertext from " + opts.in);
    }
    const auto message = mceliece::decrypt(key, mceliece::Ciphertext{parse_bits(text)});
    std::cout << bits_to_string(message) << '\n';
    return 0;
}

struct UniformityOpts {
    std::string in;
    int bins = 16;
};

int cmd_uniformity(const UniformityOpts& opts) {
    const auto values = read_numbers(opts.in);
    if (values.size() < 2)
        throw std::runtime_error("need at least 2 values, got " + std::to_string(values.size()));
    const auto report = unistat::uniformity_report(values, opts.bins);
    std::cout << "values:     " << values.size() << '\n'
              << "bins:       " << report.bin_count << " (dof " << report.dof << ")\n"
              << "chi-square: " << format_double(report.chi_square) << '\n'
              << "theta:      " << format_double(report.theta) << '\n'
              << "verdict:    " << (report.uniform ? "uniform (theta < 0.05)" : "not uniform (theta >= 0.05)")
              << '\n';
    return 0;
}

// ---------------------------------------------------------------------------
// autoencoder-cipher commands

struct TrainLikeOpts {
    std::string data = "synthetic";
    std::string activations;
    int samples = 1000;
    bool has_header = false;
    int plaintext_dim = 361;
    int ciphertext_dim = 64;
    int bins = 16;
    double alpha = 0.4;
    int epochs = 500;
    int batch = 32;
    double learning_rate = 1e-3;
    double bandwidth = 0.05;
    double theta_weight = 1.0;
    double val_fraction = 0.1;
    std::uint64_t seed = 0;
};

model::PqcnnConfig to_config(const TrainLikeOpts& opts) {
    model::PqcnnConfig cfg;
    if (!opts.activations.empty()) {
        std::istringstream ss(opts.activations);
        std::string name;
        std::size_t index = 0;
        while (std::getline(ss, name, ',')) {
            if (index >= cfg.activations.size())
                throw std::runtime_error("expected exactly 6 activations, got more in '" + opts.activations + "'");
            cfg.activations[index++] = nn::activation_from_name(name);
        }
        if (index != cfg.activations.size())
            throw std::runtime_error("expected exactly 6 activations, got " + std::to_string(index));
    }
    cfg.plaintext_dim = opts.plaintext_dim;
    cfg.ciphertext_dim = opts.ciphertext_dim;
    cfg.bins = opts.bins;
    cfg.alpha = opts.alpha;
    cfg.epochs = opts.epochs;
    cfg.batch_size = opts.batch;
    cfg.learning_rate = opts.learning_rate;
    cfg.bandwidth = opts.bandwidth;
    cfg.theta_weight = opts.theta_weight;
    cfg.validation_fraction = opts.val_fraction;
    cfg.seed = opts.seed;
    return cfg;
}

dataio::Dataset dataset_for(const TrainLikeOpts& opts) {
    auto data = load_dataset(opts.data, opts.samples, opts.plaintext_dim, opts.has_header, opts.seed);
    if (data.feature_count() != opts.plaintext_dim)
        throw std::runtime_error("dataset has " + std::to_string(data.feature_count()) +
                                 " features, but --c is " + std::to_string(opts.plaintext_dim));
    return data;
}

struct TrainOpts : TrainLikeOpts {
    std::string encrypt_out;
    std::string decrypt_out;
    std::string history_out;
    bool force = false;
};

int cmd_train(const TrainOpts& opts) {
    warn_toy_cipher();
    ensure_writable(opts.encrypt_out, opts.force);
    ensure_writable(opts.decrypt_out, opts.force);
    if (!opts.history_out.empty())
        ensure_writable(opts.history_out, opts.force);

    const auto cfg = to_config(opts);
    const auto data = dataset_for(opts);
    std::cout << "training c=" << cfg.plaintext_dim << " n=" << cfg.ciphertext_dim << " m=" << cfg.bins
              << " alpha=" << format_double(cfg.alpha) << " on " << data.sample_count() << " samples ("
              << data.provenance << ")\n";
    const auto result = model::train(cfg, data);
    std::cout << "best validation: loss=" << format_double(result.validation_loss)
              << " mse=" << format_double(result.validation_mse)
              << " theta=" << format_double(result.validation_theta) << '\n';

    const auto keys = model::split_keys(result.net, cfg);
    keyio::save(opts.encrypt_out, keys.encrypt_key);
    keyio::save(opts.decrypt_out, keys.decrypt_key);
    std::cout << "wrote " << opts.encrypt_out << " and " << opts.decrypt_out << '\n';

    if (!opts.history_out.empty()) {
        std::ofstream hist(opts.history_out, std::ios::binary);
        if (!hist)
            throw std::runtime_error("cannot write " + opts.history_out);
        hist << "epoch,train_loss,train_mse,train_theta,val_loss,val_mse,val_theta,best_val_loss\n";
        for (const auto& row : result.history)
            hist << row.epoch << ',' << format_double(row.train_loss) << ',' << format_double(row.train_mse)
                 << ',' << format_double(row.train_theta) << ',' << format_double(row.val_loss) << ','
                 << format_double(row.val_mse) << ',' << format_double(row.val_theta) << ','
                 << format_double(row.best_val_loss) << '\n';
        std::cout << "wrote " << opts.history_out << '\n';
    }
    return 0;
}

struct PqcnnEncryptOpts {
    std::string key_path;
    std::string in;
    std::string values;
    std::uint64_t seed = 0;
    std::string out;
    bool force = false;
};

int cmd_pqcnn_encrypt(const PqcnnEncryptOpts& opts) {
    warn_toy_cipher();
    const auto key = keyio::load_pqcnn_encrypt(opts.key_path);

    std::vector<double> raw;
    if (!opts.values.empty()) {
        std::istringstream ss(opts.values);
        double v;
        while (ss >> v)
            raw.push_back(v);
    } else if (!opts.in.empty()) {
        raw = read_numbers(opts.in);
    } else {
        throw std::runtime_error("provide a plaintext with --in or --values");
    }
    if (static_cast<int>(raw.size()) != key.plaintext_dim)
        throw std::runtime_error("plaintext has " + std::to_string(raw.size()) + " values, key expects " +
                                 std::to_string(key.plaintext_dim));
    Eigen::VectorXd x(key.plaintext_dim);
    for (int i = 0; i < key.plaintext_dim; ++i)
        x(i) = raw[static_cast<std::size_t>(i)];

    Rng rng(opts.seed);
    const auto enc = model::encrypt(key, x, rng);
    if (opts.out.empty()) {
        std::cout << "PQCNN-CT v1\n" << enc.y_prime.size() << ' ' << format_double(key.alpha, "%.17g") << '\n';
        for (Eigen::Index i = 0; i < enc.y_prime.size(); ++i)
            std::cout << (i ? " " : "") << format_double(enc.y_prime(i), "%.17g");
        std::cout << '\n';
    } else {
        ensure_writable(opts.out, opts.force);
        keyio::save_ciphertext(opts.out, enc.y_prime, key.alpha);
        std::cout << "wrote " << opts.out << '\n';
    }
    return 0;
}

struct PqcnnDecryptOpts {
    std::string key_path;
    std::string in;
    std::string out;
    bool force = false;
};

int cmd_pqcnn_decrypt(const PqcnnDecryptOpts& opts) {
    warn_toy_cipher();
    const auto key = keyio::load_pqcnn_decrypt(opts.key_path);
    const auto ct = keyio::load_ciphertext(opts.in);
    if (ct.values.size() != key.ciphertext_dim)
        throw std::runtime_error("ciphertext has " + std::to_string(ct.values.size()) + " values, key expects " +
                                 std::to_string(key.ciphertext_dim));
    const Eigen::VectorXd plain = model::decrypt(key, ct.values);

    std::string line;
    for (Eigen::Index i = 0; i < plain.size(); ++i) {
        if (i)
            line += ' ';
        line += format_double(plain(i), "%.17g");
    }
    if (opts.out.empty()) {
        std::cout << line << '\n';
    } else {
        ensure_writable(opts.out, opts.force);
        std::ofstream file(opts.out, std::ios::binary);
        if (!file)
            throw std::runtime_error("cannot write " + opts.out);
        file << line << '\n';
        std::cout << "wrote " << opts.out << '\n';
    }
    return 0;
}

struct EvalOpts {
    std::string encrypt_key;
    std::string decrypt_key;
    std::string data = "synthetic";
    int samples = 100;
    bool has_header = false;
    std::uint64_t seed = 0;
};

int cmd_eval(const EvalOpts& opts) {
    warn_toy_cipher();
    const auto enc = keyio::load_pqcnn_encrypt(opts.encrypt_key);
    const auto dec = keyio::load_pqcnn_decrypt(opts.decrypt_key);
    if (enc.plaintext_dim != dec.plaintext_dim || enc.ciphertext_dim != dec.ciphertext_dim)
        throw std::runtime_error("encrypt and decrypt keys disagree on their dimensions");

    model::PqcnnConfig cfg;
    cfg.plaintext_dim = enc.plaintext_dim;
    cfg.ciphertext_dim = enc.ciphertext_dim;
    cfg.bins = enc.bins;
    cfg.alpha = enc.alpha;

    nn::Network net;
    net.layers = enc.layers;
    net.layers.insert(net.layers.end(), dec.layers.begin(), dec.layers.end());
    net.validate();

    const auto data = load_dataset(opts.data, opts.samples, cfg.plaintext_dim, opts.has_header, opts.seed);
    Rng rng(opts.seed);
    const auto row = model::evaluate(net, data, cfg, rng);
    std::cout << "samples:          " << data.sample_count() << '\n'
              << "alpha:            " << format_double(row.alpha) << '\n'
              << "mse:              " << format_double(row.mse) << '\n'
              << "theta_noise:      " << format_double(row.theta_noise) << '\n'
              << "theta_ciphertext: " << format_double(row.theta_ciphertext) << '\n';
    return 0;
}

struct SweepOpts : TrainLikeOpts {
    std::string alphas = "0.1:1.0:0.1";
    std::string out;
    bool force = false;
};

int cmd_sweep(const SweepOpts& opts) {
    ensure_writable(opts.out, opts.force);
    const auto alphas = parse_alpha_spec(opts.alphas);
    const auto cfg = to_config(opts);
    const auto data = dataset_for(opts);

    std::cout << "sweeping " << alphas.size() << " alpha values, c=" << cfg.plaintext_dim << " n="
              << cfg.ciphertext_dim << " m=" << cfg.bins << ", " << data.sample_count() << " samples ("
              << data.provenance << ")\n";

    const auto rows = model::alpha_sweep(cfg, data, alphas);

    std::ofstream csv(opts.out, std::ios::binary);
    if (!csv)
        throw std::runtime_error("cannot write " + opts.out);
    csv << "alpha,mse,theta_noise,theta_ciphertext\n";
    std::printf("%-8s %-14s %-14s %-14s\n", "alpha", "mse", "theta_noise", "theta_ct");
    for (const auto& row : rows) {
        csv << format_double(row.alpha) << ',' << format_double(row.mse) << ',' << format_double(row.theta_noise)
            << ',' << format_double(row.theta_ciphertext) << '\n';
        std::printf("%-8s %-14s %-14s %-14s\n", format_double(row.alpha).c_str(), format_double(row.mse).c_str(),
                    format_double(row.theta_noise).c_str(), format_double(row.theta_ciphertext).c_str());
    }
    std::cout << "wrote " << opts.out << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"pqcnn: a toy code-based cipher and its autoencoder generalization"};
    app.require_subcommand(1);

    app.add_subcommand("demo", "run the (7,4) worked example and self-check every printed value");

    HammingOpts hamming_opts;
    auto* hamming_cmd = app.add_subcommand("hamming-roundtrip", "encode, optionally corrupt, correct, decode");
    hamming_cmd->add_option("--message", hamming_opts.message, "message bits, e.g. 1000")->required();
    hamming_cmd->add_option("--parity-bits", hamming_opts.parity_bits, "parity bits r >= 3 (code length 2^r-1)")
        ->capture_default_str();
    hamming_cmd->add_option("--flip", hamming_opts.flip, "1-based bit to corrupt (0 = none)")->capture_default_str();

    McelieceKeygenOpts keygen_opts;
    auto* keygen_cmd = app.add_subcommand("mceliece-keygen", "generate a toy McEliece key pair");
    keygen_cmd->add_option("--seed", keygen_opts.seed, "seed")->envname("PQCNN_SEED")->capture_default_str();
    keygen_cmd->add_option("--parity-bits", keygen_opts.parity_bits, "parity bits of the underlying code")
        ->capture_default_str();
    keygen_cmd->add_option("--public-out", keygen_opts.public_out, "public key path")->required();
    keygen_cmd->add_option("--private-out", keygen_opts.private_out, "private key path")->required();
    keygen_cmd->add_flag("--force", keygen_opts.force, "overwrite existing files");

    McelieceEncryptOpts menc_opts;
    auto* menc_cmd = app.add_subcommand("mceliece-encrypt", "encrypt a message with a public key");
    menc_cmd->add_option("--key", menc_opts.key_path, "public key file")->required();
    menc_cmd->add_option("--message", menc_opts.message, "message bits")->required();
    menc_cmd->add_option("--seed", menc_opts.seed, "seed")->envname("PQCNN_SEED")->capture_default_str();
    menc_cmd->add_option("--error-weight", menc_opts.error_weight, "random error bits to add (0 or 1)")
        ->capture_default_str();
    menc_cmd->add_option("--out", menc_opts.out, "ciphertext path (default: stdout)");
    menc_cmd->add_flag("--force", menc_opts.force, "overwrite existing files");

    McelieceDecryptOpts mdec_opts;
    auto* mdec_cmd = app.add_subcommand("mceliece-decrypt", "decrypt a ciphertext with a private key");
    mdec_cmd->add_option("--key", mdec_opts.key_path, "private key file")->required();
    mdec_cmd->add_option("--ciphertext", mdec_opts.ciphertext, "ciphertext bits");
    mdec_cmd->add_option("--in", mdec_opts.in, "read ciphertext bits from file");

    UniformityOpts uni_opts;
    auto* uni_cmd = app.add_subcommand("uniformity", "chi-squared uniformity report for a list of numbers");
    uni_cmd->add_option("--in", uni_opts.in, "file of whitespace/comma separated numbers")->required();
    uni_cmd->add_option("--m", uni_opts.bins, "histogram bins")->capture_default_str();

    const auto add_train_like = [](CLI::App* cmd, TrainLikeOpts& opts) {
        cmd->add_option("--data", opts.data, "CSV path or 'synthetic'")->capture_default_str();
        cmd->add_option("--samples", opts.samples, "synthetic sample count")->capture_default_str();
        cmd->add_flag("--has-header", opts.has_header, "skip the first CSV row");
        cmd->add_option("--c", opts.plaintext_dim, "plaintext width")->capture_default_str();
        cmd->add_option("--n", opts.ciphertext_dim, "ciphertext width")->capture_default_str();
        cmd->add_option("--m", opts.bins, "histogram bins (must stay below --n)")->capture_default_str();
        cmd->add_option("--epochs", opts.epochs, "training epochs")->capture_default_str();
        cmd->add_option("--batch", opts.batch, "batch size")->capture_default_str();
        cmd->add_option("--lr", opts.learning_rate, "learning rate")->capture_default_str();
        cmd->add_option("--bandwidth", opts.bandwidth, "soft histogram bandwidth")->capture_default_str();
        cmd->add_option("--activations", opts.activations,
                        "six comma-separated activations (linear|sigmoid|tanh|leaky-relu)");
        cmd->add_option("--theta-weight", opts.theta_weight, "weight of the uniformity loss term")
            ->capture_default_str();
        cmd->add_option("--val-fraction", opts.val_fraction, "validation split fraction")->capture_default_str();
        cmd->add_option("--seed", opts.seed, "seed for everything downstream")
            ->envname("PQCNN_SEED")
            ->capture_default_str();
    };

    TrainOpts train_opts;
    auto* train_cmd = app.add_subcommand("pqcnn-train", "train the autoencoder cipher and write its key pair");
    add_train_like(train_cmd, train_opts);
    train_cmd->add_option("--alpha", train_opts.alpha, "noise weight")->capture_default_str();
    train_cmd->add_option("--encrypt-out", train_opts.encrypt_out, "encrypt key path")->required();
    train_cmd->add_option("--decrypt-out", train_opts.decrypt_out, "decrypt key path")->required();
    train_cmd->add_option("--history", train_opts.history_out, "per-epoch history CSV");
    train_cmd->add_flag("--force", train_opts.force, "overwrite existing files");

    PqcnnEncryptOpts penc_opts;
    auto* penc_cmd = app.add_subcommand("pqcnn-encrypt", "encrypt one plaintext vector");
    penc_cmd->add_option("--key", penc_opts.key_path, "encrypt key file")->required();
    penc_cmd->add_option("--in", penc_opts.in, "plaintext file (whitespace/comma separated values)");
    penc_cmd->add_option("--values", penc_opts.values, "plaintext values inline, space separated");
    penc_cmd->add_option("--seed", penc_opts.seed, "seed for the noise draw")
        ->envname("PQCNN_SEED")
        ->capture_default_str();
    penc_cmd->add_option("--out", penc_opts.out, "ciphertext path (default: stdout)");
    penc_cmd->add_flag("--force", penc_opts.force, "overwrite existing files");

    PqcnnDecryptOpts pdec_opts;
    auto* pdec_cmd = app.add_subcommand("pqcnn-decrypt", "decrypt a ciphertext file");
    pdec_cmd->add_option("--key", pdec_opts.key_path, "decrypt key file")->required();
    pdec_cmd->add_option("--in", pdec_opts.in, "ciphertext file")->required();
    pdec_cmd->add_option("--out", pdec_opts.out, "plaintext output path (default: stdout)");
    pdec_cmd->add_flag("--force", pdec_opts.force, "overwrite existing files");

    EvalOpts eval_opts;
    auto* eval_cmd = app.add_subcommand("pqcnn-eval", "reconstruction and uniformity metrics for a key pair");
    eval_cmd->add_option("--encrypt-key", eval_opts.encrypt_key, "encrypt key file")->required();
    eval_cmd->add_option("--decrypt-key", eval_opts.decrypt_key, "decrypt key file")->required();
    eval_cmd->add_option("--data", eval_opts.data, "CSV path or 'synthetic'")->capture_default_str();
    eval_cmd->add_option("--samples", eval_opts.samples, "synthetic sample count")->capture_default_str();
    eval_cmd->add_flag("--has-header", eval_opts.has_header, "skip the first CSV row");
    eval_cmd->add_option("--seed", eval_opts.seed, "seed")->envname("PQCNN_SEED")->capture_default_str();

    SweepOpts sweep_opts;
    auto* sweep_cmd = app.add_subcommand("sweep", "train and evaluate across a range of noise weights");
    add_train_like(sweep_cmd, sweep_opts);
    sweep_cmd->add_option("--alphas", sweep_opts.alphas, "alpha list: start:end:step or comma separated")
        ->capture_default_str();
    sweep_cmd->add_option("--out", sweep_opts.out, "report CSV path")->required();
    sweep_cmd->add_flag("--force", sweep_opts.force, "overwrite existing files");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand("demo"))
            return cmd_demo();
        if (app.got_subcommand(hamming_cmd))
            return cmd_hamming_roundtrip(hamming_opts);
        if (app.got_subcommand(keygen_cmd))
            return cmd_mceliece_keygen(keygen_opts);
        if (app.got_subcommand(menc_cmd))
            return cmd_mceliece_encrypt(menc_opts);
        if (app.got_subcommand(mdec_cmd))
            return cmd_mceliece_decrypt(mdec_opts);
        if (app.got_subcommand(uni_cmd))
            return cmd_uniformity(uni_opts);
        if (app.got_subcommand(train_cmd))
            return cmd_train(train_opts);
        if (app.got_subcommand(penc_cmd))
            return cmd_pqcnn_encrypt(penc_opts);
        if (app.got_subcommand(pdec_cmd))
            return cmd_pqcnn_decrypt(pdec_opts);
        if (app.got_subcommand(eval_cmd))
            return cmd_eval(eval_opts);
        if (app.got_subcommand(sweep_cmd))
            return cmd_sweep(sweep_opts);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
