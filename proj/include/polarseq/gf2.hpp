#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace polarseq {

/// Dense matrix over GF(2), rows packed into 64-bit words.
class BitMatrix {
public:
    BitMatrix() = default;
    BitMatrix(std::size_t rows, std::size_t cols);

    static BitMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    bool get(std::size_t r, std::size_t c) const {
        return (words_[r * wpr_ + (c >> 6)] >> (c & 63)) & 1u;
    }
    void set(std::size_t r, std::size_t c, bool v) {
        uint64_t& w = words_[r * wpr_ + (c >> 6)];
        uint64_t mask = uint64_t(1) << (c & 63);
        w = v ? (w | mask) : (w & ~mask);
    }

    /// row r ^= row s
    void xor_rows(std::size_t r, std::size_t s);
    void swap_rows(std::size_t r, std::size_t s);
    /// Index of the last set bit in row r, or -1 for a zero row.
    int last_set(std::size_t r) const;
    /// Index of the first set bit in row r, or -1 for a zero row.
    int first_set(std::size_t r) const;
    bool row_is_zero(std::size_t r) const { return last_set(r) < 0; }
    std::size_t row_weight(std::size_t r) const;

    std::vector<uint8_t> row(std::size_t r) const;
    void set_row(std::size_t r, const std::vector<uint8_t>& bits);

    bool operator==(const BitMatrix& o) const = default;

private:
    std::size_t rows_ = 0, cols_ = 0, wpr_ = 0;
    std::vector<uint64_t> words_;
    friend BitMatrix mat_mul(const BitMatrix&, const BitMatrix&);
};

/// Product over GF(2). Throws std::invalid_argument on dimension mismatch.
BitMatrix mat_mul(const BitMatrix& a, const BitMatrix& b);

BitMatrix transpose(const BitMatrix& a);

/// m-fold Kronecker power of a square kernel; m = 0 gives the 1x1 identity.
BitMatrix kronecker_power(const BitMatrix& kernel, unsigned m);

/// The 2x2 kernel [[1,0],[1,1]].
BitMatrix arikan_kernel();

/// Rank over GF(2) (input taken by value, eliminated in place).
std::size_t gf2_rank(BitMatrix a);

/// Row echelon form with leftmost pivots; zero rows dropped.
BitMatrix row_echelon(BitMatrix a);

/// Right-to-left elimination: returns V = Q*raw (Q invertible, implicit) such
/// that the last nonzero entry of each row sits in a distinct column, rows
/// sorted by ascending pivot column. Throws std::invalid_argument if the input
/// is rank deficient (message reports the achieved rank).
BitMatrix normalize_constraints(const BitMatrix& raw);

/// GF(2^t) arithmetic via log/antilog tables over a fixed primitive polynomial.
class GF2mField {
public:
    explicit GF2mField(unsigned t);

    unsigned t() const { return t_; }
    unsigned size() const { return q_; }
    unsigned primitive_poly() const { return poly_; }

    unsigned mul(unsigned a, unsigned b) const;
    /// a^e with 0^0 = 1.
    unsigned pow(unsigned a, unsigned e) const;
    /// alpha^e, e taken modulo 2^t - 1.
    unsigned alpha_pow(unsigned e) const { return exp_[e % (q_ - 1)]; }
    unsigned log(unsigned a) const;

private:
    unsigned t_, q_, poly_;
    std::vector<unsigned> log_, exp_;
};

/// Binary check matrix of the extended primitive narrow-sense BCH code of
/// length 2^m with the given design distance: the overall-parity row plus the
/// binary expansions of c(alpha^j) = 0 for odd j in [1, d-2]. Coordinate i
/// carries the field element whose polynomial-basis representation is the
/// binary expansion of i (so coordinate 0 is the extension position).
/// Dependent rows are removed by Gaussian elimination; the result has full
/// row rank.
BitMatrix ebch_check_matrix(unsigned m, unsigned design_distance);

} // namespace polarseq
