// Acceptance suite: one line per criterion, PASS or FAIL, nonzero exit if
// anything fails. Criteria 6 and 7 train at survey scale and dominate the
// runtime.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "pqcnn/dataio.hpp"
#include "pqcnn/hamming.hpp"
#include "pqcnn/key_io.hpp"
#include "pqcnn/mceliece.hpp"
#include "pqcnn/model.hpp"
#include "pqcnn/unistat.hpp"
#include "support/quadrature.hpp"
#include "support/worked_example.hpp"

using namespace pqcnn;

namespace {

struct Criterion {
    int number;
    std::string summary;
    bool passed = true;
    std::vector<std::string> notes;
    double seconds = 0.0;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            passed = false;
            notes.push_back(what);
        }
    }
};

std::vector<BitVector> all_messages(int k) {
    std::vector<BitVector> out;
    for (int v = 0; v < (1 << k); ++v) {
        BitVector m(static_cast<std::size_t>(k));
        for (int j = 0; j < k; ++j)
            m[static_cast<std::size_t>(j)] = static_cast<std::uint8_t>((v >> j) & 1);
        out.push_back(std::move(m));
    }
    return out;
}

// -------------------------------------------------------------------------

void criterion_1(Criterion& c) {
    const auto code = hamming::standard_7_4();
    const auto keys =
        mceliece::assemble(code, worked_example::scrambler(), worked_example::permutation());

    c.require(keys.public_key.encryption_matrix == worked_example::public_matrix(),
              "public key differs from the pinned matrix");
    c.require(hamming::encode(code, worked_example::message()) == worked_example::codeword(),
              "encode differs from the pinned codeword");
    c.require(hamming::syndrome(code, worked_example::noisy_codeword()) == worked_example::noisy_syndrome(),
              "syndrome differs from the pinned value");
    const auto fixed = hamming::correct(code, worked_example::noisy_codeword());
    c.require(fixed.error_position == 7, "corrected position is not 7");
    c.require(fixed.corrected == worked_example::codeword(), "correction did not restore the codeword");

    Rng rng(0);
    const auto ct = mceliece::encrypt(keys.public_key, worked_example::message(), rng, 0);
    c.require(ct.y == worked_example::ciphertext(), "ciphertext differs from the pinned value");

    const auto trace = mceliece::decrypt_trace(keys.private_key, ct);
    c.require(trace.after_permutation_inv == worked_example::after_permutation_inverse(),
              "permutation-inverse stage differs");
    c.require(trace.after_decode == worked_example::after_decode(), "decode stage differs");
    c.require(trace.message == worked_example::message(), "decrypted message differs");
}

void criterion_2(Criterion& c) {
    for (int parity_bits : {3, 4}) {
        const auto code = hamming::construct(parity_bits);
        for (const auto& m : all_messages(code.k)) {
            const BitVector y = hamming::encode(code, m);
            if (hamming::decode(code, y) != m) {
                c.require(false, "clean decode failed at r=" + std::to_string(parity_bits));
                return;
            }
            for (int flip = 0; flip < code.n; ++flip) {
                BitVector noisy = y;
                noisy[static_cast<std::size_t>(flip)] ^= 1;
                const auto fixed = hamming::correct(code, noisy);
                if (fixed.corrected != y || hamming::decode(code, fixed.corrected) != m) {
                    c.require(false, "single-error recovery failed at r=" + std::to_string(parity_bits) +
                                         " flip=" + std::to_string(flip + 1));
                    return;
                }
            }
        }
    }
}

void criterion_3(Criterion& c) {
    const auto code = hamming::standard_7_4();
    const auto messages = all_messages(code.k);
    Rng rng(20240);
    int checked = 0;
    for (int pair = 0; pair < 100; ++pair) {
        const auto keys = mceliece::keygen(code, rng);
        for (const auto& m : messages)
            for (int weight : {0, 1}) {
                const auto ct = mceliece::encrypt(keys.public_key, m, rng, weight);
                if (mceliece::decrypt(keys.private_key, ct) != m) {
                    c.require(false, "roundtrip failed at keypair " + std::to_string(pair));
                    return;
                }
                ++checked;
            }
    }
    c.notes.push_back(std::to_string(checked) + " roundtrips");
}

void criterion_4(Criterion& c) {
    double worst_closed_form = 0.0;
    for (double x = 0.1; x <= 20.0 + 1e-12; x += 0.1) {
        const double exact = 1.0 - std::exp(-0.5 * x);
        worst_closed_form = std::max(worst_closed_form, std::abs(unistat::chi2_cdf(x, 2) - exact));
    }
    c.require(worst_closed_form < 1e-10,
              "dof=2 closed form error " + std::to_string(worst_closed_form));

    double worst_quadrature = 0.0;
    for (int dof = 1; dof <= 30; ++dof)
        for (double x : {0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 40.0, 60.0}) {
            const double expected = oracle::chi2_cdf_quadrature(x, dof);
            worst_quadrature = std::max(worst_quadrature, std::abs(unistat::chi2_cdf(x, dof) - expected));
        }
    c.require(worst_quadrature < 1e-8, "quadrature error " + std::to_string(worst_quadrature));
    {
        std::ostringstream note;
        note << "max errors: closed form " << worst_closed_form << ", quadrature " << worst_quadrature;
        c.notes.push_back(note.str());
    }
}

void criterion_5(Criterion& c) {
    model::PqcnnConfig cfg;
    cfg.plaintext_dim = 6;
    cfg.ciphertext_dim = 10;
    cfg.bins = 4;
    cfg.alpha = 0.4;

    double worst = 0.0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        Rng rng(seed);
        const nn::Network net = model::build(cfg, rng);
        Eigen::VectorXd x(cfg.plaintext_dim);
        Eigen::VectorXd noise(cfg.ciphertext_dim);
        for (int i = 0; i < cfg.plaintext_dim; ++i)
            x(i) = rng.next_real();
        for (int i = 0; i < cfg.ciphertext_dim; ++i)
            noise(i) = rng.next_real();
        const auto loss_fn = [&](const nn::Network& candidate) {
            return model::sample_loss_eval(candidate, x, noise, cfg);
        };
        worst = std::max(worst, nn::gradient_check(net, loss_fn, 1e-5));
    }
    c.require(worst < 1e-4, "max relative error " + std::to_string(worst));
    std::ostringstream note;
    note << "max relative error " << worst;
    c.notes.push_back(note.str());
}

// Survey-scale training shared by criteria 6 and 7.
struct ScaleRun {
    std::vector<double> alphas{0.1, 0.4, 1.0};
    std::vector<std::vector<model::SweepRow>> rows_per_seed; // [seed][alpha]
    model::TrainResult selected;                             // seed 1, alpha 0.4
    model::PqcnnConfig selected_config;
};

model::PqcnnConfig scale_config() {
    model::PqcnnConfig cfg;
    cfg.plaintext_dim = 361;
    cfg.ciphertext_dim = 64;
    cfg.bins = 16;
    cfg.epochs = 150;
    cfg.batch_size = 32;
    cfg.learning_rate = 1e-3;
    return cfg;
}

ScaleRun run_scale_training() {
    ScaleRun run;
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        Rng data_rng(9000 + seed);
        const auto data = dataio::synthetic_cellular(1000, 361, data_rng);
        std::vector<model::SweepRow> rows;
        for (std::size_t i = 0; i < run.alphas.size(); ++i) {
            model::PqcnnConfig cfg = scale_config();
            cfg.alpha = run.alphas[i];
            cfg.seed = seed;
            auto trained = model::train(cfg, data);
            Rng eval_rng(cfg.seed ^ 0xda3e39cb94b95bdbull);
            rows.push_back(model::evaluate(trained.net, trained.validation_set, cfg, eval_rng));
            if (seed == 1 && cfg.alpha == 0.4) {
                run.selected = std::move(trained);
                run.selected_config = cfg;
            }
        }
        run.rows_per_seed.push_back(std::move(rows));
    }
    return run;
}

void criterion_6(Criterion& c, const ScaleRun& run) {
    const auto mean_at = [&](std::size_t alpha_index, auto field) {
        double total = 0.0;
        for (const auto& rows : run.rows_per_seed)
            total += field(rows[alpha_index]);
        return total / static_cast<double>(run.rows_per_seed.size());
    };
    const double theta_01 = mean_at(0, [](const model::SweepRow& r) { return r.theta_ciphertext; });
    const double theta_04 = mean_at(1, [](const model::SweepRow& r) { return r.theta_ciphertext; });
    const double theta_10 = mean_at(2, [](const model::SweepRow& r) { return r.theta_ciphertext; });
    const double mse_01 = mean_at(0, [](const model::SweepRow& r) { return r.mse; });
    const double mse_04 = mean_at(1, [](const model::SweepRow& r) { return r.mse; });
    const double mse_10 = mean_at(2, [](const model::SweepRow& r) { return r.mse; });

    c.require(theta_04 < 0.05, "(a) held-out theta at alpha 0.4 is " + std::to_string(theta_04));
    c.require(mse_04 < 1e-2, "(b) reconstruction mse at alpha 0.4 is " + std::to_string(mse_04));
    c.require(mse_10 > mse_01, "(c) mse trend violated: mse(1.0) <= mse(0.1)");
    c.require(theta_10 < theta_01, "(c) theta trend violated: theta(1.0) >= theta(0.1)");

    std::ostringstream note;
    note << "3-seed means: theta " << theta_01 << " / " << theta_04 << " / " << theta_10 << ", mse " << mse_01
         << " / " << mse_04 << " / " << mse_10 << " at alpha 0.1 / 0.4 / 1.0";
    c.notes.push_back(note.str());
}

void criterion_7(Criterion& c, const ScaleRun& run) {
    const auto& trained = run.selected;
    const auto& cfg = run.selected_config;
    const auto keys = model::split_keys(trained.net, cfg);

    Rng rng(777);
    const int rows = trained.validation_set.sample_count();
    double total_mse = 0.0;
    for (int cycle = 0; cycle < 100; ++cycle) {
        const Eigen::VectorXd x = trained.validation_set.values.row(cycle % rows).transpose();
        const auto enc = model::encrypt(keys.encrypt_key, x, rng);
        const Eigen::VectorXd out = model::decrypt(keys.decrypt_key, enc.y_prime);
        total_mse += (out - x).squaredNorm() / static_cast<double>(cfg.plaintext_dim);
    }
    const double mean_mse = total_mse / 100.0;
    c.require(mean_mse <= 2.0 * trained.validation_mse,
              "fresh-noise mse " + std::to_string(mean_mse) + " exceeds twice the validation mse " +
                  std::to_string(trained.validation_mse));
    std::ostringstream note;
    note << "fresh-noise mse " << mean_mse << " vs validation mse " << trained.validation_mse;
    c.notes.push_back(note.str());
}

void criterion_8(Criterion& c) {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "pqcnn_acceptance_keys";
    fs::create_directories(dir);
    const auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream out;
        out << in.rdbuf();
        return out.str();
    };

    // McEliece keys
    Rng rng(4242);
    const auto mc_keys = mceliece::keygen(hamming::standard_7_4(), rng);
    keyio::save(dir / "pub.key", mc_keys.public_key);
    keyio::save(dir / "prv.key", mc_keys.private_key);
    const auto pub = keyio::load_mceliece_public(dir / "pub.key");
    const auto prv = keyio::load_mceliece_private(dir / "prv.key");
    keyio::save(dir / "pub2.key", pub);
    keyio::save(dir / "prv2.key", prv);
    c.require(slurp(dir / "pub.key") == slurp(dir / "pub2.key"), "public key file not bitwise stable");
    c.require(slurp(dir / "prv.key") == slurp(dir / "prv2.key"), "private key file not bitwise stable");

    // Autoencoder keys and a ciphertext
    model::PqcnnConfig cfg;
    cfg.plaintext_dim = 6;
    cfg.ciphertext_dim = 10;
    cfg.bins = 4;
    cfg.alpha = 0.3;
    Rng build_rng(7);
    const auto keys = model::split_keys(model::build(cfg, build_rng), cfg);
    keyio::save(dir / "enc.key", keys.encrypt_key);
    keyio::save(dir / "dec.key", keys.decrypt_key);
    const auto enc = keyio::load_pqcnn_encrypt(dir / "enc.key");
    const auto dec = keyio::load_pqcnn_decrypt(dir / "dec.key");
    keyio::save(dir / "enc2.key", enc);
    keyio::save(dir / "dec2.key", dec);
    c.require(slurp(dir / "enc.key") == slurp(dir / "enc2.key"), "encrypt key file not bitwise stable");
    c.require(slurp(dir / "dec.key") == slurp(dir / "dec2.key"), "decrypt key file not bitwise stable");
    for (int l = 0; l < 3; ++l)
        c.require((enc.layers[static_cast<std::size_t>(l)].weights -
                   keys.encrypt_key.layers[static_cast<std::size_t>(l)].weights)
                          .norm() == 0.0,
                  "encrypt key weights changed across the roundtrip");

    Eigen::VectorXd ct_values(4);
    ct_values << 0.1, -0.25, 1.0 / 3.0, 0.875;
    keyio::save_ciphertext(dir / "ct.txt", ct_values, cfg.alpha);
    const auto ct = keyio::load_ciphertext(dir / "ct.txt");
    keyio::save_ciphertext(dir / "ct2.txt", ct.values, ct.alpha);
    c.require(slurp(dir / "ct.txt") == slurp(dir / "ct2.txt"), "ciphertext file not bitwise stable");

    // wrong-kind load must fail loudly
    bool kind_mismatch_raised = false;
    try {
        keyio::load_pqcnn_decrypt(dir / "enc.key");
    } catch (const keyio::KindMismatchError&) {
        kind_mismatch_raised = true;
    }
    c.require(kind_mismatch_raised, "decrypting with an encrypt key file did not raise a kind mismatch");

    fs::remove_all(dir);
}

} // namespace

int main() {
    std::vector<Criterion> criteria;
    const auto timed = [&criteria](int number, const std::string& summary, auto&& body) {
        Criterion c{number, summary};
        const auto start = std::chrono::steady_clock::now();
        body(c);
        c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        criteria.push_back(std::move(c));
    };

    timed(1, "worked-example golden suite", [](Criterion& c) { criterion_1(c); });
    timed(2, "hamming exhaustive roundtrips at (7,4) and (15,11)", [](Criterion& c) { criterion_2(c); });
    timed(3, "mceliece roundtrips: 100 keypairs x 16 messages x error weight {0,1}",
          [](Criterion& c) { criterion_3(c); });
    timed(4, "chi-squared CDF against closed form and quadrature", [](Criterion& c) { criterion_4(c); });
    timed(5, "composite-loss gradients vs finite differences on 5 seeded models",
          [](Criterion& c) { criterion_5(c); });

    ScaleRun scale;
    {
        const auto start = std::chrono::steady_clock::now();
        scale = run_scale_training();
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("      [survey-scale training: 3 seeds x 3 alphas, %.1f s]\n", seconds);
    }
    timed(6, "survey-scale training properties (c=361, n=64, m=16)",
          [&scale](Criterion& c) { criterion_6(c, scale); });
    timed(7, "noise removal on fresh encrypt/decrypt cycles", [&scale](Criterion& c) { criterion_7(c, scale); });
    timed(8, "key and ciphertext serialization roundtrips", [](Criterion& c) { criterion_8(c); });

    bool all_passed = true;
    for (const auto& c : criteria) {
        std::printf("%s criterion %d: %s (%.2f s)\n", c.passed ? "PASS" : "FAIL", c.number, c.summary.c_str(),
                    c.seconds);
        for (const auto& note : c.notes)
            std::printf("      %s\n", note.c_str());
        all_passed = all_passed && c.passed;
    }
    if (!all_passed) {
        std::printf("acceptance: FAILURES PRESENT\n");
        return 1;
    }
    std::printf("acceptance: all criteria passed\n");
    return 0;
}
