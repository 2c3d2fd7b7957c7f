#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "pqcnn/hamming.hpp"

using namespace pqcnn;
using namespace pqcnn::hamming;

namespace {

// All 2^k messages of a code, lexicographic.
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

bool is_zero(const BitVector& v) {
    for (auto b : v)
        if (b)
            return false;
    return true;
}

void check_code_invariants(const HammingCode& code) {
    // codewords have zero syndrome
    CHECK(mul(code.generator, code.syndrome_map) == BitMatrix(code.k, code.n - code.k));
    // encode then decode is the identity
    for (const auto& m : all_messages(code.k))
        CHECK(decode(code, encode(code, m)) == m);
    // syndrome row i spells out the integer i
    for (int i = 1; i <= code.n; ++i) {
        int value = 0;
        for (int j = 0; j < code.n - code.k; ++j)
            value |= code.syndrome_map(i - 1, j) << j;
        CHECK(value == i);
    }
}

} // namespace

TEST_CASE("standard (7,4) matrices are pinned") {
    const HammingCode code = standard_7_4();
    CHECK(code.k == 4);
    CHECK(code.n == 7);
    CHECK(code.generator.row(0) == BitVector{1, 1, 1, 0, 0, 0, 0});
    CHECK(code.syndrome_map.row(6) == BitVector{1, 1, 1});
    CHECK(code.decode_map.row(2) == BitVector{1, 0, 0, 0});
}

TEST_CASE("standard (7,4) satisfies the code invariants") {
    check_code_invariants(standard_7_4());
}

TEST_CASE("construct(3) reproduces the standard (7,4) matrices") {
    const HammingCode built = construct(3);
    const HammingCode pinned = standard_7_4();
    CHECK(built.generator == pinned.generator);
    CHECK(built.syndrome_map == pinned.syndrome_map);
    CHECK(built.decode_map == pinned.decode_map);
}

TEST_CASE("construct(4) yields a working (15,11) code") {
    const HammingCode code = construct(4);
    CHECK(code.n == 15);
    CHECK(code.k == 11);
    check_code_invariants(code);

    // exhaustive single-error correction
    for (const auto& m : all_messages(code.k)) {
        const BitVector y = encode(code, m);
        for (int flip = 0; flip < code.n; ++flip) {
            BitVector noisy = y;
            noisy[static_cast<std::size_t>(flip)] ^= 1;
            const auto fixed = correct(code, noisy);
            CHECK(fixed.corrected == y);
            CHECK(fixed.error_position == flip + 1);
        }
    }
}

TEST_CASE("construct rejects fewer than 3 parity bits") {
    CHECK_THROWS_AS(construct(2), std::invalid_argument);
}

TEST_CASE("encode matches the worked example") {
    const HammingCode code = standard_7_4();
    CHECK(encode(code, {1, 0, 0, 0}) == BitVector{1, 1, 1, 0, 0, 0, 0});
    CHECK(encode(code, {0, 0, 0, 0}) == BitVector{0, 0, 0, 0, 0, 0, 0});
    CHECK_THROWS_AS(encode(code, {1, 0, 0}), std::invalid_argument);
}

TEST_CASE("every codeword has zero syndrome") {
    const HammingCode code = standard_7_4();
    for (const auto& m : all_messages(code.k))
        CHECK(is_zero(syndrome(code, encode(code, m))));
}

TEST_CASE("decode matches the worked example and roundtrips") {
    const HammingCode code = standard_7_4();
    CHECK(decode(code, {1, 1, 1, 0, 0, 0, 0}) == BitVector{1, 0, 0, 0});
    CHECK(decode(code, BitVector(7, 0)) == BitVector{0, 0, 0, 0});
    for (const auto& m : all_messages(code.k))
        CHECK(decode(code, encode(code, m)) == m);
    CHECK_THROWS_AS(decode(code, {1, 0}), std::invalid_argument);
}

TEST_CASE("syndrome spells out the flipped position") {
    const HammingCode code = standard_7_4();
    CHECK(syndrome(code, {1, 1, 1, 0, 0, 0, 1}) == BitVector{1, 1, 1});
    CHECK_THROWS_AS(syndrome(code, {1}), std::invalid_argument);

    for (const auto& m : all_messages(code.k)) {
        const BitVector y = encode(code, m);
        for (int flip = 0; flip < code.n; ++flip) {
            BitVector noisy = y;
            noisy[static_cast<std::size_t>(flip)] ^= 1;
            CHECK(syndrome(code, noisy) == code.syndrome_map.row(flip));
        }
    }
}

TEST_CASE("correct repairs the worked-example error at position 7") {
    const HammingCode code = standard_7_4();
    const auto result = correct(code, {1, 1, 1, 0, 0, 0, 1});
    CHECK(result.corrected == BitVector{1, 1, 1, 0, 0, 0, 0});
    CHECK(result.error_position == 7);
}

TEST_CASE("correct leaves clean codewords alone") {
    const HammingCode code = standard_7_4();
    const BitVector y = encode(code, {0, 1, 1, 0});
    const auto result = correct(code, y);
    CHECK(result.corrected == y);
    CHECK_FALSE(result.error_position.has_value());
}

TEST_CASE("correct repairs every single-bit error at (7,4)") {
    const HammingCode code = standard_7_4();
    for (const auto& m : all_messages(code.k)) {
        const BitVector y = encode(code, m);
        for (int flip = 0; flip < code.n; ++flip) {
            BitVector noisy = y;
            noisy[static_cast<std::size_t>(flip)] ^= 1;
            const auto result = correct(code, noisy);
            CHECK(result.corrected == y);
            CHECK(result.error_position == flip + 1);
        }
    }
    CHECK_THROWS_AS(correct(code, {1, 0}), std::invalid_argument);
}
