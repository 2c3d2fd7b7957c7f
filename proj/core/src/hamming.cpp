#include "pqcnn/hamming.hpp"

namespace pqcnn::hamming {

namespace {

bool is_power_of_two(int v) {
    return v > 0 && (v & (v - 1)) == 0;
}

void require_length(const BitVector& v, int expected, const char* what) {
    if (static_cast<int>(v.size()) != expected)
        throw std::invalid_argument(std::string(what) + ": expected length " + std::to_string(expected) +
                                    ", got " + std::to_string(v.size()));
}

} // namespace

HammingCode standard_7_4() {
    HammingCode code;
    code.k = 4;
    code.n = 7;
    code.generator = BitMatrix::from_rows({{1, 1, 1, 0, 0, 0, 0},
                                           {1, 0, 0, 1, 1, 0, 0},
                                           {0, 1, 0, 1, 0, 1, 0},
                                           {1, 1, 0, 1, 0, 0, 1}});
    code.syndrome_map = BitMatrix::from_rows({{1, 0, 0},
                                              {0, 1, 0},
                                              {1, 1, 0},
                                              {0, 0, 1},
                                              {1, 0, 1},
                                              {0, 1, 1},
                                              {1, 1, 1}});
    code.decode_map = BitMatrix::from_rows({{0, 0, 0, 0},
                                            {0, 0, 0, 0},
                                            {1, 0, 0, 0},
                                            {0, 0, 0, 0},
                                            {0, 1, 0, 0},
                                            {0, 0, 1, 0},
                                            {0, 0, 0, 1}});
    return code;
}

HammingCode construct(int parity_bits) {
    if (parity_bits < 3)
        throw std::invalid_argument("hamming::construct: need at least 3 parity bits");
    const int r = parity_bits;
    const int n = (1 << r) - 1;
    const int k = n - r;

    HammingCode code;
    code.k = k;
    code.n = n;

    // Data bits sit at the non-power-of-two positions, ascending.
    std::vector<int> data_positions;
    data_positions.reserve(static_cast<std::size_t>(k));
    for (int pos = 1; pos <= n; ++pos)
        if (!is_power_of_two(pos))
            data_positions.push_back(pos);

    code.syndrome_map = BitMatrix(n, r);
    for (int pos = 1; pos <= n; ++pos)
        for (int j = 0; j < r; ++j)
            code.syndrome_map(pos - 1, j) = static_cast<std::uint8_t>((pos >> j) & 1);

    code.decode_map = BitMatrix(n, k);
    for (int c = 0; c < k; ++c)
        code.decode_map(data_positions[static_cast<std::size_t>(c)] - 1, c) = 1;

    // Row c of the generator is the codeword of unit message c: its data
    // bit plus, at each parity position 2^j, the j-th bit of the data
    // position index. That keeps every codeword's syndrome at zero.
    code.generator = BitMatrix(k, n);
    for (int c = 0; c < k; ++c) {
        const int dp = data_positions[static_cast<std::size_t>(c)];
        code.generator(c, dp - 1) = 1;
        for (int j = 0; j < r; ++j)
            if ((dp >> j) & 1)
                code.generator(c, (1 << j) - 1) = 1;
    }
    return code;
}

BitVector encode(const HammingCode& code, const BitVector& message) {
    require_length(message, code.k, "hamming::encode");
    return mul(message, code.generator);
}

BitVector decode(const HammingCode& code, const BitVector& codeword) {
    require_length(codeword, code.n, "hamming::decode");
    return mul(codeword, code.decode_map);
}

BitVector syndrome(const HammingCode& code, const BitVector& received) {
    require_length(received, code.n, "hamming::syndrome");
    return mul(received, code.syndrome_map);
}

CorrectionResult correct(const HammingCode& code, const BitVector& received) {
    require_length(received, code.n, "hamming::correct");
    const BitVector z = syndrome(code, received);
    int position = 0;
    for (std::size_t j = 0; j < z.size(); ++j)
        position |= z[j] << j;
    if (position == 0)
        return {received, std::nullopt};
    CorrectionResult result{received, position};
    result.corrected[static_cast<std::size_t>(position - 1)] ^= 1;
    return result;
}

} // namespace pqcnn::hamming
