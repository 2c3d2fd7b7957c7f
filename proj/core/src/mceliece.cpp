#include "pqcnn/mceliece.hpp"

namespace pqcnn::mceliece {

KeyPair assemble(const hamming::HammingCode& code, const BitMatrix& scrambler, const BitMatrix& permutation) {
    if (scrambler.rows() != code.k || scrambler.cols() != code.k)
        throw std::invalid_argument("mceliece::assemble: scrambler must be k x k");
    if (permutation.rows() != code.n || permutation.cols() != code.n)
        throw std::invalid_argument("mceliece::assemble: permutation must be n x n");
    if (!is_permutation(permutation))
        throw std::invalid_argument("mceliece::assemble: not a permutation matrix");

    KeyPair pair;
    pair.private_key.scrambler = scrambler;
    pair.private_key.code = code;
    pair.private_key.permutation = permutation;
    pair.private_key.scrambler_inv = invert(scrambler); // throws if singular
    pair.private_key.permutation_inv = transpose(permutation);
    pair.public_key.encryption_matrix = mul(mul(scrambler, code.generator), permutation);
    return pair;
}

KeyPair keygen(const hamming::HammingCode& code, Rng& rng) {
    const BitMatrix scrambler = random_invertible(code.k, rng);
    const BitMatrix permutation = random_permutation(code.n, rng);
    return assemble(code, scrambler, permutation);
}

Ciphertext encrypt(const PublicKey& key, const BitVector& message, Rng& rng, int error_weight) {
    if (static_cast<int>(message.size()) != key.k())
        throw std::invalid_argument("mceliece::encrypt: expected message length " + std::to_string(key.k()) +
                                    ", got " + std::to_string(message.size()));
    if (error_weight < 0 || error_weight > 1)
        throw std::invalid_argument("mceliece::encrypt: error weight must be 0 or 1");

    BitVector y = mul(message, key.encryption_matrix);
    if (error_weight == 1) {
        const auto pos = rng.next_index(static_cast<std::uint64_t>(key.n()));
        y[static_cast<std::size_t>(pos)] ^= 1;
    }
    return Ciphertext{std::move(y)};
}

DecryptTrace decrypt_trace(const PrivateKey& key, const Ciphertext& ct) {
    if (static_cast<int>(ct.y.size()) != key.code.n)
        throw std::invalid_argument("mceliece::decrypt: expected ciphertext length " + std::to_string(key.code.n) +
                                    ", got " + std::to_string(ct.y.size()));

    DecryptTrace trace;
    trace.after_permutation_inv = mul(ct.y, key.permutation_inv);
    auto correction = hamming::correct(key.code, trace.after_permutation_inv);
    trace.corrected = std::move(correction.corrected);
    trace.error_position = correction.error_position;
    trace.after_decode = mul(trace.corrected, key.code.decode_map);
    trace.message = mul(trace.after_decode, key.scrambler_inv);
    return trace;
}

BitVector decrypt(const PrivateKey& key, const Ciphertext& ct) {
    return decrypt_trace(key, ct).message;
}

} // namespace pqcnn::mceliece
