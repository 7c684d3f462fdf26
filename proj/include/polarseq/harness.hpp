#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "polarseq/bias.hpp"
#include "polarseq/code_spec.hpp"

namespace polarseq {

enum class DecoderKind { sc, scl, seq };

// One Monte-Carlo sweep: an SNR list, a decoder, and a stop rule.
//
// Per-frame protocol (replayed identically by every worker layout):
//   rng = frame_rng(master_seed, frame_index)       [frame_index from 0 per SNR]
//   info bits: k draws of (rng() & 1), ascending info position
//   transmit spec.encode(info) over AWGN at sigma = eb_n0_to_sigma(snr, k/n)
//   decode the channel LLRs
// A frame is in error when the decoded codeword differs from the transmitted
// one or the decoder abandons; an abandoned frame also counts all k info bits
// as bit errors.
//
// Frames are processed in batches of 256 (the last batch truncated so
// max_frames binds exactly); the stop rule is evaluated at batch boundaries
// only, so the set of simulated frames never depends on the worker count.
struct Campaign {
    const CodeSpec* spec = nullptr;
    DecoderKind decoder = DecoderKind::sc;
    std::size_t list_size = 8;       // scl only
    std::size_t visit_budget = 8;    // seq only: per-phase pop budget
    std::size_t queue_capacity = 64; // seq only: path/queue bound
    std::vector<double> snr_db;
    // seq only: one table per SNR point, built for this m and that SNR's sigma.
    std::vector<BiasTable> bias;
    std::size_t min_frame_errors = 100;
    std::size_t max_frames = 1000000;
    std::uint64_t master_seed = 1;
    unsigned workers = 1;
};

struct SnrResult {
    double snr_db = 0.0;
    std::uint64_t frames = 0;
    std::uint64_t frame_errors = 0;
    std::uint64_t bit_errors = 0;
    std::uint64_t abandoned = 0;
    double fer = 0.0;
    double ber = 0.0;
    double fer_sigma = 0.0;  // binomial standard error of fer
    double avg_iterations = 0.0;
    double avg_ops = 0.0;        // additions + comparisons + queue comparisons
    double avg_peak_queue = 0.0;
};

struct SimReport {
    std::vector<SnrResult> rows;
};

// Runs the campaign. Throws std::invalid_argument on configuration errors
// (null spec, empty SNR list, zero stop rule, missing or mismatched bias
// tables, bad decoder limits) before simulating anything. The report is a
// pure function of (campaign minus workers): worker count only changes
// scheduling, never results.
SimReport run_campaign(const Campaign& campaign);

// CSV with header snr_db,frames,fer,ber,avg_iters,avg_ops,avg_peak_pq,abandoned
// and one row per SNR; real values printed with 6 significant digits.
std::string emit_csv(const SimReport& report);

// Capacity (bits/use) and dispersion of the binary-input AWGN channel at
// noise level sigma, by Gauss-Hermite quadrature.
struct ChannelCV {
    double capacity = 0.0;
    double dispersion = 0.0;
};
ChannelCV bi_awgn_cv(double sigma);

// Normal-approximation frame error rate for an (n, k) code on BI-AWGN at the
// given Eb/N0: Q((nC - k + 0.5 log2 n) / sqrt(nV)).
double normal_approximation_fer(std::size_t n, std::size_t k, double ebn0_db);

}  // namespace polarseq
