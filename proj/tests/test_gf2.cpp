#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "polarseq/gf2.hpp"
#include "support/gf2_oracles.hpp"

using polarseq::BitMatrix;
using polarseq::GF2mField;
using polarseq::transpose;

static BitMatrix from_rows(std::size_t cols, const std::vector<std::vector<uint8_t>>& rows) {
    BitMatrix m(rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) m.set_row(r, rows[r]);
    return m;
}

TEST_CASE("kronecker_power base cases") {
    BitMatrix f = polarseq::arikan_kernel();
    CHECK(kronecker_power(f, 1) == f);
    CHECK(kronecker_power(f, 0) == BitMatrix::identity(1));
    BitMatrix expect = from_rows(4, {{1, 0, 0, 0}, {1, 1, 0, 0}, {1, 0, 1, 0}, {1, 1, 1, 1}});
    CHECK(kronecker_power(f, 2) == expect);
}

TEST_CASE("kronecker_power composes like the definition") {
    BitMatrix f = polarseq::arikan_kernel();
    CHECK(kronecker_power(f, 2) == oracles::kron(f, f));
    CHECK(kronecker_power(f, 3) == oracles::kron(oracles::kron(f, f), f));
    CHECK(kronecker_power(f, 5) == oracles::kron(kronecker_power(f, 2), kronecker_power(f, 3)));
}

TEST_CASE("kronecker_power row weights are 2^popcount") {
    BitMatrix g = kronecker_power(polarseq::arikan_kernel(), 3);
    for (std::size_t i = 0; i < 8; ++i)
        CHECK(g.row_weight(i) == (std::size_t(1) << std::popcount(unsigned(i))));
}

TEST_CASE("mat_mul basics") {
    BitMatrix f = polarseq::arikan_kernel();
    BitMatrix x = from_rows(3, {{1, 0, 1}, {0, 1, 1}});
    CHECK(mat_mul(BitMatrix::identity(2), x) == x);
    BitMatrix ones_row = from_rows(2, {{1, 1}});
    BitMatrix ones_col = from_rows(1, {{1}, {1}});
    CHECK(mat_mul(ones_row, ones_col) == from_rows(1, {{0}}));
    CHECK(mat_mul(f, f) == BitMatrix::identity(2));
    CHECK_THROWS_AS(mat_mul(x, x), std::invalid_argument);
}

TEST_CASE("transpose flips indices and distributes over products") {
    BitMatrix x = from_rows(3, {{1, 0, 1}, {0, 1, 1}});
    CHECK(transpose(x) == from_rows(2, {{1, 0}, {0, 1}, {1, 1}}));
    CHECK(transpose(transpose(x)) == x);
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        BitMatrix a(5, 7), b(7, 4);
        for (std::size_t r = 0; r < 5; ++r)
            for (std::size_t c = 0; c < 7; ++c) a.set(r, c, rng() & 1u);
        for (std::size_t r = 0; r < 7; ++r)
            for (std::size_t c = 0; c < 4; ++c) b.set(r, c, rng() & 1u);
        CHECK(transpose(mat_mul(a, b)) == mat_mul(transpose(b), transpose(a)));
    }
}

TEST_CASE("polar transform matrices are involutions") {
    BitMatrix f = polarseq::arikan_kernel();
    for (unsigned m = 1; m <= 6; ++m) {
        BitMatrix g = kronecker_power(f, m);
        CHECK(mat_mul(g, g) == BitMatrix::identity(std::size_t(1) << m));
    }
}

TEST_CASE("normalize_constraints leaves a normalized input alone") {
    // rows already end in distinct columns; only reordering may happen
    BitMatrix in = from_rows(4, {{0, 1, 0, 0}, {1, 0, 0, 0}});
    BitMatrix v = normalize_constraints(in);
    CHECK(v == from_rows(4, {{1, 0, 0, 0}, {0, 1, 0, 0}}));
}

TEST_CASE("normalize_constraints single elimination step") {
    BitMatrix in = from_rows(4, {{1, 0, 0, 1}, {0, 1, 0, 1}});
    BitMatrix v = normalize_constraints(in);
    CHECK(v == from_rows(4, {{1, 1, 0, 0}, {1, 0, 0, 1}}));
}

TEST_CASE("normalize_constraints random full-rank matrices") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        BitMatrix raw(4, 8);
        do {
            for (std::size_t r = 0; r < 4; ++r)
                for (std::size_t c = 0; c < 8; ++c) raw.set(r, c, rng() & 1);
        } while (polarseq::gf2_rank(raw) != 4);

        BitMatrix v = normalize_constraints(raw);
        REQUIRE(v.rows() == 4);

        std::set<int> pivots;
        int prev = -1;
        for (std::size_t r = 0; r < 4; ++r) {
            int p = v.last_set(r);
            CHECK(p > prev);
            prev = p;
            pivots.insert(p);
        }
        CHECK(pivots.size() == 4);

        // same row space both ways
        BitMatrix stacked(8, 8);
        for (std::size_t r = 0; r < 4; ++r) {
            stacked.set_row(r, raw.row(r));
            stacked.set_row(4 + r, v.row(r));
        }
        CHECK(polarseq::gf2_rank(stacked) == 4);
        CHECK(polarseq::gf2_rank(v) == 4);

        // Q solved from V = Q*raw must be invertible and reproduce V
        BitMatrix q(4, 4);
        for (std::size_t r = 0; r < 4; ++r) {
            auto x = oracles::solve_left(raw, v.row(r));
            REQUIRE(x.has_value());
            q.set_row(r, *x);
        }
        CHECK(polarseq::gf2_rank(q) == 4);
        CHECK(mat_mul(q, raw) == v);
    }
}

TEST_CASE("normalize_constraints reports rank deficiency") {
    BitMatrix in = from_rows(4, {{1, 0, 1, 0}, {1, 0, 1, 0}});
    CHECK_THROWS_WITH_AS(normalize_constraints(in),
                         doctest::Contains("rank"), std::invalid_argument);
}

TEST_CASE("GF2mField tables match carry-less multiplication") {
    for (unsigned t : {2u, 3u, 4u, 6u}) {
        GF2mField field(t);
        unsigned q = field.size();
        for (unsigned a = 0; a < q; ++a)
            for (unsigned b = 0; b < q; ++b)
                CHECK(field.mul(a, b) ==
                      oracles::gf2m_mul_slow(a, b, field.primitive_poly(), t));
    }
}

TEST_CASE("GF2mField primitivity and inverses") {
    GF2mField field(4);
    std::set<unsigned> seen;
    for (unsigned e = 0; e < 15; ++e) seen.insert(field.alpha_pow(e));
    CHECK(seen.size() == 15);
    CHECK(field.alpha_pow(15) == 1);
    for (unsigned a = 1; a < 16; ++a) CHECK(field.mul(a, field.pow(a, 14)) == 1);
    CHECK(field.pow(0, 0) == 1);
    CHECK(field.pow(0, 3) == 0);
}

TEST_CASE("ebch_check_matrix d=2 is the parity check") {
    BitMatrix h = polarseq::ebch_check_matrix(3, 2);
    REQUIRE(h.rows() == 1);
    CHECK(h.row_weight(0) == 8);
}

TEST_CASE("ebch_check_matrix (4,4): dimension and distance") {
    BitMatrix h = polarseq::ebch_check_matrix(4, 4);
    std::size_t r = h.rows();
    CHECK(polarseq::gf2_rank(h) == r);
    CHECK(r == 5);
    CHECK(oracles::null_space_basis(h).size() == 16 - r);

    // no word of weight 1..3 passes every check
    for (unsigned a = 0; a < 16; ++a)
        for (unsigned b = a; b < 16; ++b)
            for (unsigned c = b; c < 16; ++c) {
                std::vector<uint8_t> w(16, 0);
                w[a] ^= 1; w[b] ^= 1; w[c] ^= 1;
                bool all_zero = true;
                for (std::size_t row = 0; row < r && all_zero; ++row) {
                    int acc = 0;
                    for (std::size_t i = 0; i < 16; ++i) acc ^= h.get(row, i) & w[i];
                    if (acc) all_zero = false;
                }
                CHECK_FALSE(all_zero);
            }
}

TEST_CASE("ebch null spaces have even weight for m <= 4") {
    for (auto [m, d] : std::vector<std::pair<unsigned, unsigned>>{{3, 2}, {3, 4}, {4, 4}, {4, 6}}) {
        BitMatrix h = polarseq::ebch_check_matrix(m, d);
        auto basis = oracles::null_space_basis(h);
        std::size_t n = std::size_t(1) << m;
        for (uint64_t sel = 0; sel < (uint64_t(1) << basis.size()); ++sel) {
            std::vector<uint8_t> w(n, 0);
            for (std::size_t i = 0; i < basis.size(); ++i)
                if ((sel >> i) & 1)
                    for (std::size_t j = 0; j < n; ++j) w[j] ^= basis[i][j];
            std::size_t weight = 0;
            for (auto bit : w) weight += bit;
            CHECK(weight % 2 == 0);
        }
    }
}

TEST_CASE("ebch_check_matrix (6,6) matches the cyclotomic coset count") {
    BitMatrix h = polarseq::ebch_check_matrix(6, 6);
    std::size_t expect_rank =
        1 + oracles::cyclotomic_coset_size(1, 6) + oracles::cyclotomic_coset_size(3, 6);
    CHECK(h.rows() == expect_rank);
    CHECK(oracles::null_space_basis(h).size() == 64 - expect_rank);
    CHECK(64 - expect_rank == 51);
}

TEST_CASE("ebch_check_matrix rejects invalid parameters") {
    CHECK_THROWS_AS(polarseq::ebch_check_matrix(1, 2), std::invalid_argument);
    CHECK_THROWS_AS(polarseq::ebch_check_matrix(3, 1), std::invalid_argument);
    CHECK_THROWS_AS(polarseq::ebch_check_matrix(3, 8), std::invalid_argument);
}
