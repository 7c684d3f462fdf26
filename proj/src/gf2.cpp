#include "polarseq/gf2.hpp"

#include <bit>
#include <stdexcept>
#include <string>

namespace polarseq {

BitMatrix::BitMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), wpr_((cols + 63) / 64), words_(rows * wpr_, 0) {}

BitMatrix BitMatrix::identity(std::size_t n) {
    BitMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i, true);
    return m;
}

void BitMatrix::xor_rows(std::size_t r, std::size_t s) {
    uint64_t* dst = &words_[r * wpr_];
    const uint64_t* src = &words_[s * wpr_];
    for (std::size_t w = 0; w < wpr_; ++w) dst[w] ^= src[w];
}

void BitMatrix::swap_rows(std::size_t r, std::size_t s) {
    if (r == s) return;
    uint64_t* a = &words_[r * wpr_];
    uint64_t* b = &words_[s * wpr_];
    for (std::size_t w = 0; w < wpr_; ++w) std::swap(a[w], b[w]);
}

int BitMatrix::last_set(std::size_t r) const {
    const uint64_t* row = &words_[r * wpr_];
    for (std::size_t w = wpr_; w-- > 0;) {
        if (row[w]) return int(w * 64 + 63 - std::countl_zero(row[w]));
    }
    return -1;
}

int BitMatrix::first_set(std::size_t r) const {
    const uint64_t* row = &words_[r * wpr_];
    for (std::size_t w = 0; w < wpr_; ++w) {
        if (row[w]) return int(w * 64 + std::countr_zero(row[w]));
    }
    return -1;
}

std::size_t BitMatrix::row_weight(std::size_t r) const {
    const uint64_t* row = &words_[r * wpr_];
    std::size_t n = 0;
    for (std::size_t w = 0; w < wpr_; ++w) n += std::size_t(std::popcount(row[w]));
    return n;
}

std::vector<uint8_t> BitMatrix::row(std::size_t r) const {
    std::vector<uint8_t> bits(cols_);
    for (std::size_t c = 0; c < cols_; ++c) bits[c] = get(r, c);
    return bits;
}

void BitMatrix::set_row(std::size_t r, const std::vector<uint8_t>& bits) {
    if (bits.size() != cols_) throw std::invalid_argument("set_row: width mismatch");
    for (std::size_t c = 0; c < cols_; ++c) set(r, c, bits[c] != 0);
}

BitMatrix mat_mul(const BitMatrix& a, const BitMatrix& b) {
    if (a.cols() != b.rows())
        throw std::invalid_argument("mat_mul: dimension mismatch " + std::to_string(a.cols()) +
                                    " vs " + std::to_string(b.rows()));
    BitMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        uint64_t* dst = &c.words_[i * c.wpr_];
        for (std::size_t j = 0; j < a.cols(); ++j) {
            if (!a.get(i, j)) continue;
            const uint64_t* src = &b.words_[j * b.wpr_];
            for (std::size_t w = 0; w < b.wpr_; ++w) dst[w] ^= src[w];
        }
    }
    return c;
}

BitMatrix transpose(const BitMatrix& a) {
    BitMatrix t(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (a.get(i, j)) t.set(j, i, true);
    return t;
}

BitMatrix kronecker_power(const BitMatrix& kernel, unsigned m) {
    if (kernel.rows() != kernel.cols())
        throw std::invalid_argument("kronecker_power: kernel must be square");
    BitMatrix acc = BitMatrix::identity(1);
    for (unsigned step = 0; step < m; ++step) {
        std::size_t ar = acc.rows(), l = kernel.rows();
        BitMatrix next(ar * l, ar * l);
        for (std::size_t ki = 0; ki < l; ++ki)
            for (std::size_t kj = 0; kj < l; ++kj) {
                if (!kernel.get(ki, kj)) continue;
                for (std::size_t i = 0; i < ar; ++i)
                    for (std::size_t j = 0; j < ar; ++j)
                        if (acc.get(i, j)) next.set(ki * ar + i, kj * ar + j, true);
            }
        acc = next;
    }
    return acc;
}

BitMatrix arikan_kernel() {
    BitMatrix f(2, 2);
    f.set(0, 0, true);
    f.set(1, 0, true);
    f.set(1, 1, true);
    return f;
}

std::size_t gf2_rank(BitMatrix a) {
    std::size_t rank = 0;
    for (std::size_t c = 0; c < a.cols() && rank < a.rows(); ++c) {
        std::size_t pivot = rank;
        while (pivot < a.rows() && !a.get(pivot, c)) ++pivot;
        if (pivot == a.rows()) continue;
        a.swap_rows(rank, pivot);
        for (std::size_t r = 0; r < a.rows(); ++r)
            if (r != rank && a.get(r, c)) a.xor_rows(r, rank);
        ++rank;
    }
    return rank;
}

BitMatrix row_echelon(BitMatrix a) {
    std::size_t rank = 0;
    for (std::size_t c = 0; c < a.cols() && rank < a.rows(); ++c) {
        std::size_t pivot = rank;
        while (pivot < a.rows() && !a.get(pivot, c)) ++pivot;
        if (pivot == a.rows()) continue;
        a.swap_rows(rank, pivot);
        for (std::size_t r = 0; r < a.rows(); ++r)
            if (r != rank && a.get(r, c)) a.xor_rows(r, rank);
        ++rank;
    }
    BitMatrix out(rank, a.cols());
    for (std::size_t r = 0; r < rank; ++r) out.set_row(r, a.row(r));
    return out;
}

BitMatrix normalize_constraints(const BitMatrix& raw) {
    BitMatrix work = raw;
    std::vector<int> owner(raw.cols(), -1); // pivot column -> row index
    std::size_t achieved = 0;
    for (std::size_t r = 0; r < work.rows(); ++r) {
        int p = work.last_set(r);
        while (p >= 0 && owner[std::size_t(p)] >= 0) {
            work.xor_rows(r, std::size_t(owner[std::size_t(p)]));
            p = work.last_set(r);
        }
        if (p < 0)
            throw std::invalid_argument("normalize_constraints: rank deficient input (rank " +
                                        std::to_string(achieved) + " < " +
                                        std::to_string(work.rows()) + " rows)");
        owner[std::size_t(p)] = int(r);
        ++achieved;
    }
    BitMatrix out(work.rows(), work.cols());
    std::size_t next = 0;
    for (std::size_t c = 0; c < work.cols(); ++c)
        if (owner[c] >= 0) out.set_row(next++, work.row(std::size_t(owner[c])));
    return out;
}

namespace {
// Standard primitive polynomials over GF(2), degree bit included.
constexpr unsigned kPrimitivePoly[] = {
    0,      0,      0x7,     0xb,     0x13,    0x25,    0x43,   0x89,
    0x11d,  0x211,  0x409,   0x805,   0x1053,  0x201b,  0x4443, 0x8003,
    0x1100b,
};
} // namespace

GF2mField::GF2mField(unsigned t) : t_(t), q_(1u << t) {
    if (t < 2 || t > 16) throw std::invalid_argument("GF2mField: t must be in [2,16]");
    poly_ = kPrimitivePoly[t];
    exp_.assign(q_ - 1, 0);
    log_.assign(q_, 0);
    unsigned x = 1;
    for (unsigned i = 0; i < q_ - 1; ++i) {
        exp_[i] = x;
        log_[x] = i;
        x <<= 1;
        if (x & q_) x ^= poly_;
    }
    if (x != 1) throw std::logic_error("GF2mField: polynomial is not primitive");
}

unsigned GF2mField::mul(unsigned a, unsigned b) const {
    if (a == 0 || b == 0) return 0;
    return exp_[(log_[a] + log_[b]) % (q_ - 1)];
}

unsigned GF2mField::pow(unsigned a, unsigned e) const {
    if (e == 0) return 1;
    if (a == 0) return 0;
    return exp_[(std::size_t(log_[a]) * e) % (q_ - 1)];
}

unsigned GF2mField::log(unsigned a) const {
    if (a == 0 || a >= q_) throw std::invalid_argument("GF2mField::log: out of range");
    return log_[a];
}

BitMatrix ebch_check_matrix(unsigned m, unsigned design_distance) {
    if (m < 2 || m > 16)
        throw std::invalid_argument("ebch_check_matrix: m must be in [2,16]");
    unsigned n = 1u << m;
    if (design_distance < 2 || design_distance >= n)
        throw std::invalid_argument("ebch_check_matrix: design distance must be in [2, 2^m)");

    GF2mField field(m);
    std::vector<std::vector<uint8_t>> rows;
    rows.emplace_back(n, uint8_t(1)); // overall parity
    for (unsigned j = 1; j + 2 <= design_distance; j += 2) {
        std::vector<std::vector<uint8_t>> block(m, std::vector<uint8_t>(n, 0));
        for (unsigned i = 0; i < n; ++i) {
            unsigned v = field.pow(i, j); // coordinate i <-> field element i; 0^j = 0
            for (unsigned b = 0; b < m; ++b) block[b][i] = (v >> b) & 1u;
        }
        for (auto& r : block) rows.push_back(std::move(r));
    }
    BitMatrix h(rows.size(), n);
    for (std::size_t r = 0; r < rows.size(); ++r) h.set_row(r, rows[r]);
    return row_echelon(h);
}

} // namespace polarseq
