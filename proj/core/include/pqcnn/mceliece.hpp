#pragma once

#include "pqcnn/bit_matrix.hpp"
#include "pqcnn/hamming.hpp"
#include "pqcnn/rng.hpp"

namespace pqcnn::mceliece {

// Toy McEliece over a Hamming code. The public key is the product
// scrambler * generator * permutation; decryption peels the factors off in
// reverse, using the code's single-error correction to strip the random
// error vector. Kept at Hamming-code parameters this is a pedagogical
// cipher, trivially breakable; it exists as a reference for the neural
// construction built on top of it.

struct PublicKey {
    BitMatrix encryption_matrix; // k x n
    int k() const { return encryption_matrix.rows(); }
    int n() const { return encryption_matrix.cols(); }
};

struct PrivateKey {
    BitMatrix scrambler;   // k x k, invertible
    hamming::HammingCode code;
    BitMatrix permutation; // n x n
    BitMatrix scrambler_inv;
    BitMatrix permutation_inv;
};

struct KeyPair {
    PublicKey public_key;
    PrivateKey private_key;
};

struct Ciphertext {
    BitVector y;
};

// Builds a key pair from explicitly chosen factors (the scrambler must be
// invertible, the permutation a permutation matrix).
KeyPair assemble(const hamming::HammingCode& code, const BitMatrix& scrambler, const BitMatrix& permutation);

KeyPair keygen(const hamming::HammingCode& code, Rng& rng);

// error_weight 0 gives the deterministic product, 1 (default) adds a random
// single-bit error, removed at decryption by the code's correction step.
Ciphertext encrypt(const PublicKey& key, const BitVector& message, Rng& rng, int error_weight = 1);

BitVector decrypt(const PrivateKey& key, const Ciphertext& ct);

// Decryption with the intermediate values exposed: after the permutation
// inverse, after error correction, after the decode map, and the final
// message (product with the scrambler inverse).
struct DecryptTrace {
    BitVector after_permutation_inv;
    BitVector corrected;
    std::optional<int> error_position;
    BitVector after_decode;
    BitVector message;
};

DecryptTrace decrypt_trace(const PrivateKey& key, const Ciphertext& ct);

} // namespace pqcnn::mceliece
