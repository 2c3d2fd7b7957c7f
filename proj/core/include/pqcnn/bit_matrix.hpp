#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "pqcnn/rng.hpp"

namespace pqcnn {

using BitVector = std::vector<std::uint8_t>;

struct SingularMatrixError : std::runtime_error {
    SingularMatrixError() : std::runtime_error("matrix is singular over GF(2)") {}
};

// Dense row-major matrix over GF(2): addition is XOR, multiplication is AND
// accumulated with XOR. Everything here is small (at most a few thousand
// entries), so one byte per bit and no packing.
class BitMatrix {
public:
    BitMatrix() = default;
    BitMatrix(int rows, int cols);

    static BitMatrix identity(int dim);
    static BitMatrix from_rows(std::initializer_list<std::initializer_list<int>> rows);
    static BitMatrix row_vector(const BitVector& values);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    std::uint8_t operator()(int r, int c) const { return bits_[index(r, c)]; }
    std::uint8_t& operator()(int r, int c) { return bits_[index(r, c)]; }

    BitVector row(int r) const;
    // Flattens row-major; mostly used to read back 1xN products.
    BitVector to_vector() const { return bits_; }

    bool operator==(const BitMatrix&) const = default;

private:
    std::size_t index(int r, int c) const {
        return static_cast<std::size_t>(r) * static_cast<std::size_t>(cols_) + static_cast<std::size_t>(c);
    }

    int rows_ = 0;
    int cols_ = 0;
    std::vector<std::uint8_t> bits_;
};

BitMatrix mul(const BitMatrix& a, const BitMatrix& b);
BitMatrix add(const BitMatrix& a, const BitMatrix& b);
BitMatrix transpose(const BitMatrix& a);

// Gauss-Jordan elimination on [a | I]; pivots are chosen leftmost column
// first, topmost available row first. Throws SingularMatrixError.
BitMatrix invert(const BitMatrix& a);

BitMatrix random_matrix(int rows, int cols, Rng& rng);
// Rejection-samples uniform square matrices until one is invertible
// (succeeds in under 4 attempts on average at any dimension).
BitMatrix random_invertible(int dim, Rng& rng);
BitMatrix random_permutation(int dim, Rng& rng);
bool is_permutation(const BitMatrix& a);

// Row-vector convenience: (1 x n) times (n x m).
BitVector mul(const BitVector& v, const BitMatrix& a);
BitVector add(const BitVector& a, const BitVector& b);

std::string to_string(const BitVector& v);
std::string to_string(const BitMatrix& a);

} // namespace pqcnn
