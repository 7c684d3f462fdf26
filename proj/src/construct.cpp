#include "polarseq/construct.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <stdexcept>

#include "polarseq/channel.hpp"
#include "polarseq/datapath.hpp"
#include "polarseq/gf2.hpp"

namespace polarseq {

ReliabilityOrder reliability_genie_mc(unsigned m, double sigma, std::size_t frames,
                                      std::uint64_t seed) {
    if (frames == 0) throw std::invalid_argument("reliability_genie_mc: need at least one frame");
    const std::size_t n = std::size_t{1} << m;
    Workspace ws(m, 2);
    const AwgnChannel ch{sigma};
    const std::vector<std::uint8_t> zero(n, 0);
    std::vector<double> wrong(n, 0.0);
    for (std::size_t f = 0; f < frames; ++f) {
        std::mt19937_64 rng = frame_rng(seed, f);
        const std::vector<double> llrs = llr(transmit(zero, ch, rng), ch);
        const std::vector<double> s = genie_sc_llrs(ws, llrs);
        for (std::size_t i = 0; i < n; ++i) {
            if (s[i] < 0.0)
                wrong[i] += 1.0;
            else if (s[i] == 0.0)
                wrong[i] += 0.5;
        }
    }
    ReliabilityOrder rel;
    rel.error_prob.resize(n);
    for (std::size_t i = 0; i < n; ++i) rel.error_prob[i] = wrong[i] / static_cast<double>(frames);
    rel.order.resize(n);
    std::iota(rel.order.begin(), rel.order.end(), std::size_t{0});
    std::sort(rel.order.begin(), rel.order.end(), [&](std::size_t a, std::size_t b) {
        if (rel.error_prob[a] != rel.error_prob[b]) return rel.error_prob[a] > rel.error_prob[b];
        return a < b;
    });
    return rel;
}

CodeSpec construct_polar(unsigned m, std::size_t k, const ReliabilityOrder& rel) {
    const std::size_t n = std::size_t{1} << m;
    if (k > n) throw std::invalid_argument("construct_polar: k exceeds the code length");
    if (rel.order.size() != n)
        throw std::invalid_argument("construct_polar: reliability order length mismatch");
    std::vector<std::uint32_t> frozen(rel.order.begin(),
                                      rel.order.begin() + static_cast<std::ptrdiff_t>(n - k));
    std::sort(frozen.begin(), frozen.end());
    std::vector<ConstraintRow> rows;
    rows.reserve(frozen.size());
    for (std::uint32_t pivot : frozen) rows.push_back({pivot, {}});
    return CodeSpec(m, std::move(rows));
}

CodeSpec construct_ebch_subcode(unsigned m, unsigned design_distance) {
    const BitMatrix h = ebch_check_matrix(m, design_distance);
    const BitMatrix g = kronecker_power(arikan_kernel(), m);
    const BitMatrix v = normalize_constraints(mat_mul(h, transpose(g)));
    std::vector<ConstraintRow> rows;
    rows.reserve(v.rows());
    for (std::size_t r = 0; r < v.rows(); ++r) {
        ConstraintRow row;
        row.pivot = static_cast<std::uint32_t>(v.last_set(r));
        for (std::uint32_t c = 0; c < row.pivot; ++c)
            if (v.get(r, c)) row.cols.push_back(c);
        rows.push_back(std::move(row));
    }
    return CodeSpec(m, std::move(rows));
}

CodeSpec construct_randomized_subcode(const CodeSpec& base, std::size_t extra_checks,
                                      std::uint64_t seed) {
    if (extra_checks > base.k())
        throw std::invalid_argument("construct_randomized_subcode: extra_checks exceeds dimension");
    const std::vector<std::uint32_t>& info = base.info_positions();
    const std::size_t keep = info.size() - extra_checks;
    // The surviving info positions all precede the converted pivots, so each
    // new row may draw from every one of them.
    const std::vector<std::uint32_t> candidates(info.begin(),
                                                info.begin() + static_cast<std::ptrdiff_t>(keep));
    std::mt19937_64 rng(seed);
    std::vector<ConstraintRow> rows = base.rows();
    for (std::size_t j = keep; j < info.size(); ++j) {
        ConstraintRow row;
        row.pivot = info[j];
        if (!candidates.empty()) {
            do {
                row.cols.clear();
                for (std::uint32_t c : candidates)
                    if (rng() & 1u) row.cols.push_back(c);
            } while (row.cols.empty());
        }
        rows.push_back(std::move(row));
    }
    std::sort(rows.begin(), rows.end(),
              [](const ConstraintRow& a, const ConstraintRow& b) { return a.pivot < b.pivot; });
    return CodeSpec(base.m(), std::move(rows));
}

}  // namespace polarseq
