#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace polarseq {

// Binary-input AWGN channel with BPSK mapping 0 -> +1, 1 -> -1, so that a
// positive log-likelihood ratio favors bit 0 and sign(LLR) = (-1)^bit.
struct AwgnChannel {
    double sigma;
};

// sigma for a BPSK real channel at the given Eb/N0 (dB) and code rate:
// sigma = (2 * rate * 10^(ebn0/10))^(-1/2).
double eb_n0_to_sigma(double ebn0_db, double rate);

// y_i = (1 - 2 c_i) + noise, noise iid Gaussian(0, sigma^2).
std::vector<double> transmit(const std::vector<std::uint8_t>& codeword, const AwgnChannel& ch,
                             std::mt19937_64& rng);

// Channel LLRs: 2 y_i / sigma^2.
std::vector<double> llr(const std::vector<double>& y, const AwgnChannel& ch);

// SplitMix64 mixing step; used to derive independent per-frame substreams.
std::uint64_t splitmix64(std::uint64_t x);

// Seed of the substream for one simulated frame. Frames can then be
// generated in any order or on any worker without changing their noise.
std::uint64_t frame_seed(std::uint64_t master_seed, std::uint64_t frame_index);

inline std::mt19937_64 frame_rng(std::uint64_t master_seed, std::uint64_t frame_index) {
    return std::mt19937_64(frame_seed(master_seed, frame_index));
}

}  // namespace polarseq
