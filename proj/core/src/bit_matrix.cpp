#include "pqcnn/bit_matrix.hpp"

#include <sstream>
#include <utility>

namespace pqcnn {

namespace {

void require_positive_dims(int rows, int cols) {
    if (rows < 1 || cols < 1)
        throw std::invalid_argument("BitMatrix: dimensions must be positive");
}

} // namespace

BitMatrix::BitMatrix(int rows, int cols) : rows_(rows), cols_(cols) {
    require_positive_dims(rows, cols);
    bits_.assign(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), 0);
}

BitMatrix BitMatrix::identity(int dim) {
    BitMatrix m(dim, dim);
    for (int i = 0; i < dim; ++i)
        m(i, i) = 1;
    return m;
}

BitMatrix BitMatrix::from_rows(std::initializer_list<std::initializer_list<int>> rows) {
    const int r = static_cast<int>(rows.size());
    if (r == 0)
        throw std::invalid_argument("BitMatrix::from_rows: empty row list");
    const int c = static_cast<int>(rows.begin()->size());
    BitMatrix m(r, c);
    int i = 0;
    for (const auto& row : rows) {
        if (static_cast<int>(row.size()) != c)
            throw std::invalid_argument("BitMatrix::from_rows: ragged row list");
        int j = 0;
        for (int v : row)
            m(i, j++) = static_cast<std::uint8_t>(v & 1);
        ++i;
    }
    return m;
}

BitMatrix BitMatrix::row_vector(const BitVector& values) {
    BitMatrix m(1, static_cast<int>(values.size()));
    for (int j = 0; j < m.cols(); ++j)
        m(0, j) = values[static_cast<std::size_t>(j)] & 1;
    return m;
}

BitVector BitMatrix::row(int r) const {
    BitVector out(static_cast<std::size_t>(cols_));
    for (int j = 0; j < cols_; ++j)
        out[static_cast<std::size_t>(j)] = (*this)(r, j);
    return out;
}

BitMatrix mul(const BitMatrix& a, const BitMatrix& b) {
    if (a.cols() != b.rows())
        throw std::invalid_argument("BitMatrix mul: inner dimensions differ (" +
                                    std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + ")");
    BitMatrix out(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i) {
        for (int k = 0; k < a.cols(); ++k) {
            if (!a(i, k))
                continue;
            for (int j = 0; j < b.cols(); ++j)
                out(i, j) ^= b(k, j);
        }
    }
    return out;
}

BitMatrix add(const BitMatrix& a, const BitMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("BitMatrix add: dimensions differ");
    BitMatrix out(a.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            out(i, j) = a(i, j) ^ b(i, j);
    return out;
}

BitMatrix transpose(const BitMatrix& a) {
    BitMatrix out(a.cols(), a.rows());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            out(j, i) = a(i, j);
    return out;
}

BitMatrix invert(const BitMatrix& a) {
    if (a.rows() != a.cols())
        throw std::invalid_argument("BitMatrix invert: matrix must be square");
    const int n = a.rows();

    // Augmented [a | I], reduced in place.
    BitMatrix work(n, 2 * n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j)
            work(i, j) = a(i, j);
        work(i, n + i) = 1;
    }

    for (int col = 0; col < n; ++col) {
        int pivot = col;
        while (pivot < n && !work(pivot, col))
            ++pivot;
        if (pivot == n)
            throw SingularMatrixError();
        if (pivot != col)
            for (int j = 0; j < 2 * n; ++j)
                std::swap(work(col, j), work(pivot, j));
        for (int i = 0; i < n; ++i) {
            if (i == col || !work(i, col))
                continue;
            for (int j = 0; j < 2 * n; ++j)
                work(i, j) ^= work(col, j);
        }
    }

    BitMatrix out(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            out(i, j) = work(i, n + j);
    return out;
}

BitMatrix random_matrix(int rows, int cols, Rng& rng) {
    BitMatrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            m(i, j) = static_cast<std::uint8_t>(rng.next_bit());
    return m;
}

BitMatrix random_invertible(int dim, Rng& rng) {
    if (dim < 1)
        throw std::invalid_argument("random_invertible: dim must be positive");
    for (;;) {
        BitMatrix candidate = random_matrix(dim, dim, rng);
        try {
            invert(candidate);
            return candidate;
        } catch (const SingularMatrixError&) {
        }
    }
}

BitMatrix random_permutation(int dim, Rng& rng) {
    if (dim < 1)
        throw std::invalid_argument("random_permutation: dim must be positive");
    std::vector<int> target(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i)
        target[static_cast<std::size_t>(i)] = i;
    for (int i = dim - 1; i > 0; --i) {
        const auto j = static_cast<int>(rng.next_index(static_cast<std::uint64_t>(i) + 1));
        std::swap(target[static_cast<std::size_t>(i)], target[static_cast<std::size_t>(j)]);
    }
    BitMatrix p(dim, dim);
    for (int i = 0; i < dim; ++i)
        p(i, target[static_cast<std::size_t>(i)]) = 1;
    return p;
}

bool is_permutation(const BitMatrix& a) {
    if (a.rows() != a.cols())
        return false;
    for (int i = 0; i < a.rows(); ++i) {
        int row_sum = 0;
        for (int j = 0; j < a.cols(); ++j)
            row_sum += a(i, j);
        if (row_sum != 1)
            return false;
    }
    for (int j = 0; j < a.cols(); ++j) {
        int col_sum = 0;
        for (int i = 0; i < a.rows(); ++i)
            col_sum += a(i, j);
        if (col_sum != 1)
            return false;
    }
    return true;
}

BitVector mul(const BitVector& v, const BitMatrix& a) {
    return mul(BitMatrix::row_vector(v), a).to_vector();
}

BitVector add(const BitVector& a, const BitVector& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("BitVector add: lengths differ");
    BitVector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        out[i] = (a[i] ^ b[i]) & 1;
    return out;
}

std::string to_string(const BitVector& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i)
            s += ' ';
        s += v[i] ? '1' : '0';
    }
    s += ']';
    return s;
}

std::string to_string(const BitMatrix& a) {
    std::ostringstream out;
    for (int i = 0; i < a.rows(); ++i)
        out << to_string(a.row(i)) << '\n';
    return out.str();
}

} // namespace pqcnn
