#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "polarseq/code_spec.hpp"
#include "polarseq/gf2.hpp"
#include "support/gf2_oracles.hpp"

using namespace polarseq;

namespace {

// Oracle route: encode u as a 1xn BitMatrix times the m-fold Kronecker power
// of the 2x2 kernel, built definitionally.
std::vector<std::uint8_t> transform_via_matrix(const std::vector<std::uint8_t>& u, unsigned m) {
    const std::size_t n = u.size();
    BitMatrix row(1, n);
    for (std::size_t i = 0; i < n; ++i) row.set(0, i, u[i]);
    BitMatrix g(1, 1);
    g.set(0, 0, true);
    for (unsigned i = 0; i < m; ++i) g = oracles::kron(g, arikan_kernel());
    const BitMatrix prod = mat_mul(row, g);
    std::vector<std::uint8_t> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = prod.get(0, i) ? 1 : 0;
    return out;
}

// Oracle route: evaluate constraints via an explicit (n-k) x n GF(2) matrix W
// with W[j][pivot_j] = 1 and W[j][c] = 1 for each stored column; u is a
// solution iff W u^T = 0.
BitMatrix full_constraint_matrix(const CodeSpec& spec) {
    BitMatrix w(spec.rows().size(), spec.n());
    for (std::size_t j = 0; j < spec.rows().size(); ++j) {
        w.set(j, spec.rows()[j].pivot, true);
        for (std::uint32_t c : spec.rows()[j].cols) w.set(j, c, true);
    }
    return w;
}

bool satisfies_via_matrix(const CodeSpec& spec, const std::vector<std::uint8_t>& u) {
    const BitMatrix w = full_constraint_matrix(spec);
    BitMatrix col(spec.n(), 1);
    for (std::size_t i = 0; i < spec.n(); ++i) col.set(i, 0, u[i]);
    const BitMatrix prod = mat_mul(w, col);
    for (std::size_t j = 0; j < prod.rows(); ++j)
        if (prod.get(j, 0)) return false;
    return true;
}

std::vector<std::uint8_t> random_bits(std::size_t len, std::mt19937_64& rng) {
    std::vector<std::uint8_t> v(len);
    for (auto& b : v) b = static_cast<std::uint8_t>(rng() & 1u);
    return v;
}

}  // namespace

TEST_CASE("polar transform matches the Kronecker-matrix product") {
    std::mt19937_64 rng(11);
    for (unsigned m = 1; m <= 6; ++m) {
        for (int it = 0; it < 50; ++it) {
            std::vector<std::uint8_t> u = random_bits(std::size_t{1} << m, rng);
            const std::vector<std::uint8_t> expect = transform_via_matrix(u, m);
            std::vector<std::uint8_t> got = u;
            polar_transform_inplace(got);
            CHECK(got == expect);
        }
    }
}

TEST_CASE("polar transform is an involution") {
    std::mt19937_64 rng(12);
    for (unsigned m = 1; m <= 8; ++m) {
        std::vector<std::uint8_t> u = random_bits(std::size_t{1} << m, rng);
        std::vector<std::uint8_t> v = u;
        polar_transform_inplace(v);
        polar_transform_inplace(v);
        CHECK(v == u);
    }
    std::vector<std::uint8_t> bad(3, 0);
    CHECK_THROWS_AS(polar_transform_inplace(bad), std::invalid_argument);
}

TEST_CASE("CodeSpec validation rejects malformed constraint sets") {
    CHECK_THROWS_AS(CodeSpec(2, {{2, {}}, {1, {}}}), std::invalid_argument);  // pivots not ascending
    CHECK_THROWS_AS(CodeSpec(2, {{1, {}}, {1, {}}}), std::invalid_argument);  // duplicate pivot
    CHECK_THROWS_AS(CodeSpec(2, {{1, {1}}}), std::invalid_argument);          // col == pivot
    CHECK_THROWS_AS(CodeSpec(2, {{1, {2}}}), std::invalid_argument);          // col > pivot
    CHECK_THROWS_AS(CodeSpec(2, {{3, {0, 0}}}), std::invalid_argument);       // cols not ascending
    CHECK_THROWS_AS(CodeSpec(2, {{4, {}}}), std::invalid_argument);           // pivot >= n
    CHECK_THROWS_AS(CodeSpec(0, {}), std::invalid_argument);                  // m out of range

    const CodeSpec ok(2, {{1, {0}}});
    CHECK(ok.n() == 4);
    CHECK(ok.k() == 3);
    CHECK(ok.dynamic_row_count() == 1);
    CHECK(ok.is_frozen(1));
    CHECK(!ok.is_frozen(0));
    CHECK(ok.row_of(1) == 0);
    CHECK(ok.row_of(2) == -1);
    CHECK(ok.rows_listing(0) == std::vector<std::uint32_t>{0});
    CHECK(ok.rows_listing(2).empty());
    CHECK(ok.info_positions() == std::vector<std::uint32_t>{0, 2, 3});
}

TEST_CASE("static frozen expansion places zeros and info bits in phase order") {
    const CodeSpec spec(3, {{0, {}}, {1, {}}, {2, {}}, {4, {}}});
    CHECK(spec.k() == 4);
    CHECK(spec.dynamic_row_count() == 0);
    const std::vector<std::uint8_t> info{1, 0, 1, 1};
    const std::vector<std::uint8_t> u = spec.expand_info(info);
    CHECK(u == std::vector<std::uint8_t>{0, 0, 0, 1, 0, 0, 1, 1});
    CHECK(spec.encode(info) == transform_via_matrix(u, 3));
}

TEST_CASE("dynamic row copies its source parity; hand-checked encoding") {
    const CodeSpec spec(2, {{1, {0}}});  // u1 = u0
    const std::vector<std::uint8_t> info{1, 0, 1};
    const std::vector<std::uint8_t> u = spec.expand_info(info);
    CHECK(u == std::vector<std::uint8_t>{1, 1, 0, 1});
    const std::vector<std::uint8_t> c = spec.encode(info);
    CHECK(c == std::vector<std::uint8_t>{1, 0, 1, 1});  // hand expansion of u * F^(2)
    CHECK(spec.extract_info(c) == info);
    CHECK(spec.is_codeword(c));

    // Exactly 2^k of the 2^n words are codewords, and the two membership
    // routes (implementation vs explicit-matrix product) always agree.
    std::size_t members = 0;
    for (unsigned w = 0; w < 16; ++w) {
        std::vector<std::uint8_t> word{static_cast<std::uint8_t>(w & 1), static_cast<std::uint8_t>((w >> 1) & 1),
                                       static_cast<std::uint8_t>((w >> 2) & 1), static_cast<std::uint8_t>((w >> 3) & 1)};
        std::vector<std::uint8_t> uu = word;
        polar_transform_inplace(uu);
        const bool via_matrix = satisfies_via_matrix(spec, uu);
        CHECK(spec.is_codeword(word) == via_matrix);
        if (via_matrix) ++members;
    }
    CHECK(members == 8);
}

TEST_CASE("random specs: encode agrees with matrix oracle and constraints hold") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 40; ++trial) {
        const unsigned m = 2 + static_cast<unsigned>(rng() % 3);  // 4..16 bits
        const std::size_t n = std::size_t{1} << m;
        std::vector<ConstraintRow> rows;
        for (std::size_t i = 0; i < n; ++i) {
            if (rng() % 3 != 0) continue;  // freeze about a third of positions
            ConstraintRow r;
            r.pivot = static_cast<std::uint32_t>(i);
            for (std::uint32_t c = 0; c < i; ++c)
                if (rng() & 1u) r.cols.push_back(c);
            rows.push_back(std::move(r));
        }
        const CodeSpec spec(m, rows);
        for (int it = 0; it < 10; ++it) {
            const std::vector<std::uint8_t> info = random_bits(spec.k(), rng);
            const std::vector<std::uint8_t> u = spec.expand_info(info);
            CHECK(satisfies_via_matrix(spec, u));
            const std::vector<std::uint8_t> c = spec.encode(info);
            CHECK(c == transform_via_matrix(u, m));
            CHECK(spec.is_codeword(c));
            CHECK(spec.extract_info(c) == info);
        }
    }
}

TEST_CASE("text round trip is bit exact") {
    const CodeSpec spec(2, {{1, {0}}});
    CHECK(spec.to_text() == "polar-subcode v1 m=2 k=3\n1: 0\n");
    CHECK(CodeSpec::from_text(spec.to_text()) == spec);

    const CodeSpec bigger(3, {{0, {}}, {3, {0, 1, 2}}, {5, {2, 4}}});
    const std::string text = bigger.to_text();
    CHECK(text == "polar-subcode v1 m=3 k=5\n0:\n3: 0 1 2\n5: 2 4\n");
    CHECK(CodeSpec::from_text(text) == bigger);
    CHECK(CodeSpec::from_text(text).to_text() == text);
}

TEST_CASE("file save/load round trip") {
    const CodeSpec spec(3, {{0, {}}, {1, {}}, {4, {1, 2}}});
    const std::string path = "test_code_spec_roundtrip.tmp";
    spec.save(path);
    const CodeSpec back = CodeSpec::load(path);
    CHECK(back == spec);
    std::remove(path.c_str());
    CHECK_THROWS_AS(CodeSpec::load("definitely/not/a/real/file.txt"), std::runtime_error);
}

TEST_CASE("malformed text is rejected") {
    CHECK_THROWS_AS(CodeSpec::from_text("subcode v1 m=2 k=3\n"), std::invalid_argument);
    CHECK_THROWS_AS(CodeSpec::from_text("polar-subcode v2 m=2 k=3\n"), std::invalid_argument);
    CHECK_THROWS_AS(CodeSpec::from_text("polar-subcode v1 m=x k=3\n"), std::invalid_argument);
    CHECK_THROWS_AS(CodeSpec::from_text("polar-subcode v1 m=2 k=2\n1: 0\n"), std::invalid_argument);  // k mismatch
    CHECK_THROWS_AS(CodeSpec::from_text("polar-subcode v1 m=2 k=2\n1 0\n"), std::invalid_argument);   // missing colon
    CHECK_THROWS_AS(CodeSpec::from_text("polar-subcode v1 m=2 k=2\n2: 0\n1:\n"), std::invalid_argument);
    CHECK_THROWS_AS(CodeSpec::from_text("polar-subcode v1 m=2 k=3\n1: z\n"), std::invalid_argument);
}

TEST_CASE("wrong-length inputs are rejected") {
    const CodeSpec spec(2, {{1, {0}}});
    CHECK_THROWS_AS(spec.expand_info({1, 0}), std::invalid_argument);
    CHECK_THROWS_AS(spec.extract_info({1, 0}), std::invalid_argument);
    CHECK(!spec.is_codeword({1, 0}));
}
