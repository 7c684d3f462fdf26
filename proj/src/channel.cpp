#include "polarseq/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace polarseq {

double eb_n0_to_sigma(double ebn0_db, double rate) {
    if (!(rate > 0.0) || rate > 1.0) throw std::invalid_argument("rate must be in (0, 1]");
    return 1.0 / std::sqrt(2.0 * rate * std::pow(10.0, ebn0_db / 10.0));
}

std::vector<double> transmit(const std::vector<std::uint8_t>& codeword, const AwgnChannel& ch,
                             std::mt19937_64& rng) {
    if (!(ch.sigma >= 0.0)) throw std::invalid_argument("sigma must be nonnegative");
    std::normal_distribution<double> noise(0.0, 1.0);
    std::vector<double> y(codeword.size());
    for (std::size_t i = 0; i < y.size(); ++i)
        y[i] = (codeword[i] ? -1.0 : 1.0) + ch.sigma * noise(rng);
    return y;
}

std::vector<double> llr(const std::vector<double>& y, const AwgnChannel& ch) {
    if (!(ch.sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
    const double scale = 2.0 / (ch.sigma * ch.sigma);
    std::vector<double> out(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) out[i] = scale * y[i];
    return out;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t frame_seed(std::uint64_t master_seed, std::uint64_t frame_index) {
    return splitmix64(splitmix64(master_seed) ^ frame_index);
}

}  // namespace polarseq
