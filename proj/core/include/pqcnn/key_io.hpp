#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "pqcnn/mceliece.hpp"
#include "pqcnn/model.hpp"

namespace pqcnn::keyio {

// Versioned text formats. Every key file starts with
//
//     PQCNN-KEY v1
//     <kind>
//
// where kind is one of mceliece-public, mceliece-private, pqcnn-encrypt,
// pqcnn-decrypt. Bit matrices are written one row per line as 0/1 strings;
// real weights as space-separated decimals with 17 significant digits, so
// save -> load -> save reproduces the file byte for byte.

struct ParseError : std::runtime_error {
    int line;
    ParseError(int line_number, const std::string& message)
        : std::runtime_error("line " + std::to_string(line_number) + ": " + message), line(line_number) {}
};

struct UnsupportedVersionError : std::runtime_error {
    explicit UnsupportedVersionError(const std::string& found)
        : std::runtime_error("unsupported key file version: '" + found + "' (expected 'PQCNN-KEY v1')") {}
};

struct KindMismatchError : std::runtime_error {
    KindMismatchError(const std::string& expected, const std::string& found)
        : std::runtime_error("key kind mismatch: expected " + expected + ", file holds " + found) {}
};

void save(const std::filesystem::path& path, const mceliece::PublicKey& key);
void save(const std::filesystem::path& path, const mceliece::PrivateKey& key);
mceliece::PublicKey load_mceliece_public(const std::filesystem::path& path);
mceliece::PrivateKey load_mceliece_private(const std::filesystem::path& path);

void save(const std::filesystem::path& path, const model::EncryptKey& key);
void save(const std::filesystem::path& path, const model::DecryptKey& key);
model::EncryptKey load_pqcnn_encrypt(const std::filesystem::path& path);
model::DecryptKey load_pqcnn_decrypt(const std::filesystem::path& path);

// Reads just the header; handy for friendlier CLI dispatch errors.
std::string peek_kind(const std::filesystem::path& path);

// Ciphertext file: "PQCNN-CT v1", then "<n> <alpha>", then one line of n
// decimals.
struct CiphertextFile {
    Eigen::VectorXd values;
    double alpha = 0.0;
};

void save_ciphertext(const std::filesystem::path& path, const Eigen::VectorXd& values, double alpha);
CiphertextFile load_ciphertext(const std::filesystem::path& path);

} // namespace pqcnn::keyio
