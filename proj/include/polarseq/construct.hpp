#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "polarseq/code_spec.hpp"

namespace polarseq {

// Per-subchannel error-probability estimates and the induced ordering of the
// subchannels from least to most reliable, so freezing takes a prefix.
struct ReliabilityOrder {
    std::vector<double> error_prob;   // indexed by subchannel
    std::vector<std::size_t> order;   // descending error_prob, ties by index
};

// Genie-aided Monte-Carlo reliability estimate: transmit the all-zero
// codeword `frames` times at noise level sigma and run successive
// cancellation with every prior symbol forced to its true value. The error
// probability of subchannel i is the frequency of S_i < 0 plus half the
// frequency of S_i = 0.
ReliabilityOrder reliability_genie_mc(unsigned m, double sigma, std::size_t frames,
                                      std::uint64_t seed);

// Plain polar code: freeze the 2^m - k least reliable subchannels as static
// rows. Throws std::invalid_argument when k > 2^m.
CodeSpec construct_polar(unsigned m, std::size_t k, const ReliabilityOrder& rel);

// Re-express the extended BCH code of the given design distance through the
// polar transform: the constraint rows are normalize_constraints(H * G^T)
// where H is the binary eBCH check matrix and G the transform matrix. The
// dimension follows from the rank of H.
CodeSpec construct_ebch_subcode(unsigned m, unsigned design_distance);

// Convert the extra_checks highest-indexed unfrozen positions of base into
// dynamic frozen rows. Each new row's earlier-column set is drawn uniformly
// (independent fair coin per candidate, rejecting the empty draw) over the
// positions that remain unfrozen below the pivot, deterministically from
// seed. Throws std::invalid_argument when extra_checks exceeds base.k().
CodeSpec construct_randomized_subcode(const CodeSpec& base, std::size_t extra_checks,
                                      std::uint64_t seed);

}  // namespace polarseq
