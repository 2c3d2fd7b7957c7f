#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "pqcnn/key_io.hpp"
#include "support/worked_example.hpp"

using namespace pqcnn;

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("pqcnn_keys_" + std::to_string(reinterpret_cast<std::uintptr_t>(this)));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
};

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

mceliece::KeyPair sample_keys() {
    return mceliece::assemble(hamming::standard_7_4(), worked_example::scrambler(),
                              worked_example::permutation());
}

model::KeyPair sample_model_keys(double alpha = 0.375) {
    model::PqcnnConfig cfg;
    cfg.plaintext_dim = 5;
    cfg.ciphertext_dim = 9;
    cfg.bins = 4;
    cfg.alpha = alpha;
    Rng rng(512);
    return model::split_keys(model::build(cfg, rng), cfg);
}

} // namespace

TEST_CASE("mceliece public keys roundtrip byte for byte") {
    TempDir dir;
    const auto path = dir.path / "public.key";
    const auto keys = sample_keys();
    keyio::save(path, keys.public_key);
    const auto loaded = keyio::load_mceliece_public(path);
    CHECK(loaded.encryption_matrix == keys.public_key.encryption_matrix);

    const auto again = dir.path / "public2.key";
    keyio::save(again, loaded);
    CHECK(slurp(path) == slurp(again));
}

TEST_CASE("mceliece private keys roundtrip and rebuild their inverses") {
    TempDir dir;
    const auto path = dir.path / "private.key";
    const auto keys = sample_keys();
    keyio::save(path, keys.private_key);
    const auto loaded = keyio::load_mceliece_private(path);
    CHECK(loaded.scrambler == keys.private_key.scrambler);
    CHECK(loaded.permutation == keys.private_key.permutation);
    CHECK(loaded.scrambler_inv == keys.private_key.scrambler_inv);
    CHECK(loaded.code.generator == keys.private_key.code.generator);

    // the reloaded key still decrypts
    Rng rng(5);
    const auto ct = mceliece::encrypt(keys.public_key, {1, 0, 1, 1}, rng, 1);
    CHECK(mceliece::decrypt(loaded, ct) == BitVector{1, 0, 1, 1});

    const auto again = dir.path / "private2.key";
    keyio::save(again, loaded);
    CHECK(slurp(path) == slurp(again));
}

TEST_CASE("pqcnn keys roundtrip bitwise") {
    TempDir dir;
    const auto keys = sample_model_keys();

    const auto enc_path = dir.path / "enc.key";
    keyio::save(enc_path, keys.encrypt_key);
    const auto enc = keyio::load_pqcnn_encrypt(enc_path);
    CHECK(enc.alpha == keys.encrypt_key.alpha);
    CHECK(enc.bins == keys.encrypt_key.bins);
    for (int l = 0; l < 3; ++l) {
        CHECK(enc.layers[l].activation == keys.encrypt_key.layers[l].activation);
        CHECK((enc.layers[l].weights - keys.encrypt_key.layers[l].weights).norm() == 0.0);
    }
    const auto enc_again = dir.path / "enc2.key";
    keyio::save(enc_again, enc);
    CHECK(slurp(enc_path) == slurp(enc_again));

    const auto dec_path = dir.path / "dec.key";
    keyio::save(dec_path, keys.decrypt_key);
    const auto dec = keyio::load_pqcnn_decrypt(dec_path);
    for (int l = 0; l < 3; ++l)
        CHECK((dec.layers[l].weights - keys.decrypt_key.layers[l].weights).norm() == 0.0);
}

TEST_CASE("loading a decrypt key from an encrypt file is a kind mismatch") {
    TempDir dir;
    const auto keys = sample_model_keys();
    const auto path = dir.path / "enc.key";
    keyio::save(path, keys.encrypt_key);
    CHECK_THROWS_AS(keyio::load_pqcnn_decrypt(path), keyio::KindMismatchError);
    CHECK(keyio::peek_kind(path) == "pqcnn-encrypt");
}

TEST_CASE("mceliece loaders also enforce the kind tag") {
    TempDir dir;
    const auto keys = sample_keys();
    const auto path = dir.path / "private.key";
    keyio::save(path, keys.private_key);
    CHECK_THROWS_AS(keyio::load_mceliece_public(path), keyio::KindMismatchError);
}

TEST_CASE("a wrong version line is rejected explicitly") {
    TempDir dir;
    const auto path = dir.path / "bad.key";
    std::ofstream(path) << "PQCNN-KEY v9\nmceliece-public\n4 7\n";
    CHECK_THROWS_AS(keyio::load_mceliece_public(path), keyio::UnsupportedVersionError);
}

TEST_CASE("truncated private keys name the missing section") {
    TempDir dir;
    const auto keys = sample_keys();
    const auto path = dir.path / "private.key";
    keyio::save(path, keys.private_key);

    // chop the file right before the P section
    const std::string full = slurp(path);
    const auto cut = full.find("\nP\n");
    REQUIRE(cut != std::string::npos);
    const auto truncated = dir.path / "truncated.key";
    std::ofstream(truncated, std::ios::binary) << full.substr(0, cut + 1);

    try {
        keyio::load_mceliece_private(truncated);
        FAIL("expected ParseError");
    } catch (const keyio::ParseError& e) {
        CHECK(std::string(e.what()).find("section P") != std::string::npos);
    }
}

TEST_CASE("malformed weight rows carry a line number") {
    TempDir dir;
    const auto keys = sample_model_keys();
    const auto path = dir.path / "enc.key";
    keyio::save(path, keys.encrypt_key);

    std::string text = slurp(path);
    const auto pos = text.find("W 5 5\n");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, 6, "W 5 x\n");
    const auto broken = dir.path / "broken.key";
    std::ofstream(broken, std::ios::binary) << text;

    try {
        keyio::load_pqcnn_encrypt(broken);
        FAIL("expected ParseError");
    } catch (const keyio::ParseError& e) {
        CHECK(e.line == 4);
    }
}

TEST_CASE("ciphertext files roundtrip") {
    TempDir dir;
    const auto path = dir.path / "ct.txt";
    Eigen::VectorXd values(5);
    values << 0.25, 1.0 / 3.0, -0.125, 0.7071067811865476, 2.0;
    keyio::save_ciphertext(path, values, 0.4);
    const auto loaded = keyio::load_ciphertext(path);
    CHECK(loaded.alpha == 0.4);
    CHECK((loaded.values - values).norm() == 0.0);

    const auto again = dir.path / "ct2.txt";
    keyio::save_ciphertext(again, loaded.values, loaded.alpha);
    CHECK(slurp(path) == slurp(again));
}

TEST_CASE("ciphertext files validate their headers") {
    TempDir dir;
    const auto path = dir.path / "bad.txt";
    std::ofstream(path) << "PQCNN-CT v2\n3 0.1\n0 0 0\n";
    CHECK_THROWS_AS(keyio::load_ciphertext(path), keyio::UnsupportedVersionError);

    const auto short_file = dir.path / "short.txt";
    std::ofstream(short_file) << "PQCNN-CT v1\n4 0.1\n0 0 0\n";
    CHECK_THROWS_AS(keyio::load_ciphertext(short_file), keyio::ParseError);
}
