#pragma once

#include <optional>

#include "pqcnn/bit_matrix.hpp"

namespace pqcnn::hamming {

// A binary Hamming code as three matrices: generator (k x n) maps a message
// to a codeword, syndrome_map (n x (n-k)) maps a received word to its
// syndrome, decode_map (n x k) selects the data bits out of a clean
// codeword. Row i of syndrome_map is the binary encoding of i (1-based,
// component j carrying weight 2^(j-1)), so a syndrome reads directly as the
// error position.
struct HammingCode {
    int k = 0;
    int n = 0;
    BitMatrix generator;
    BitMatrix syndrome_map;
    BitMatrix decode_map;
};

// The classic (7,4) instance, matrices pinned verbatim.
HammingCode standard_7_4();

// General single-error-correcting code with r parity bits (r >= 3):
// n = 2^r - 1, k = n - r. Syndrome rows are placed in ascending integer
// order; data bits live at the non-power-of-two positions, in order.
HammingCode construct(int parity_bits);

BitVector encode(const HammingCode& code, const BitVector& message);
BitVector decode(const HammingCode& code, const BitVector& codeword);
BitVector syndrome(const HammingCode& code, const BitVector& received);

struct CorrectionResult {
    BitVector corrected;
    std::optional<int> error_position; // 1-based; empty when the syndrome is zero
};

// Repairs any single-bit error exactly. A word with two or more flipped
// bits still yields a zero-syndrome result, but at the wrong codeword;
// that is inherent to distance-3 codes and is not detected here.
CorrectionResult correct(const HammingCode& code, const BitVector& received);

} // namespace pqcnn::hamming
