#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace polarseq {

// Cumulative distribution function sampled on the uniform grid
// x_i = lo + i * step, i in [0, values.size()). Values are clamped to [0, 1]
// and nondecreasing.
struct DiscretizedCdf {
    double lo = 0.0;
    double step = 0.0;
    std::vector<double> values;

    double x_at(std::size_t i) const { return lo + static_cast<double>(i) * step; }
    // Linear interpolation, clamped to the edge values outside the grid.
    double at(double x) const;
};

// Score offsets Psi(phase) subtracted from accumulated penalties so that the
// expected score of the correct path stays near zero at every depth.
// values has n + 1 entries, values[0] = 0, nonincreasing and nonpositive.
struct BiasTable {
    unsigned m = 0;
    double sigma = 0.0;
    std::string method;  // "de", "mc", or "zero"
    std::vector<double> values;

    std::size_t n() const { return std::size_t{1} << m; }
    double psi(std::size_t phase) const { return values[phase]; }

    // All-zero table: scores reduce to raw penalties.
    static BiasTable zero(unsigned m, double sigma = 0.0);

    // Throws std::invalid_argument unless the table was built for this m and
    // (within 1e-9 relative tolerance) this sigma.
    void ensure_matches(unsigned m_expected, double sigma_expected) const;

    // Text form: header `bias v1 m=<m> sigma=<sigma> method=<method>` then
    // n + 1 lines `<phase> <value>`, values printed with %.17g so the decimal
    // representation round-trips exactly.
    std::string to_text() const;
    static BiasTable from_text(const std::string& text);
    void save(const std::string& path) const;
    static BiasTable load(const std::string& path);

    bool operator==(const BiasTable&) const = default;
};

// Discretization controls for the density-evolution method.
struct GridParams {
    double half_width = 60.0;   // grid spans [-half_width, half_width]
    double step = 1.0 / 16.0;   // grid resolution
    double tail_tolerance = 1e-6;  // max probability mass allowed off-grid
};

// CDF of the channel LLR 2y/sigma^2 under the all-zero codeword:
// Gaussian with mean 2/sigma^2 and variance 4/sigma^2, with the mass of
// each grid cell attributed to its nearest node so that grids of moderate
// resolution carry no first-order location bias.
DiscretizedCdf channel_llr_cdf(double sigma, const GridParams& grid);

// Check-node step: CDF of sgn(X1) sgn(X2) min(|X1|, |X2|) for iid X ~ F.
// Branchwise: x < 0 -> 2F(x)(1 - F(-x)); x >= 0 -> 2F(x) - F(-x)^2 - F(x)^2,
// with the mirrored argument read one node below -x so that point masses on
// the magnitude boundary are counted exactly once.
DiscretizedCdf cdf_evolve_even(const DiscretizedCdf& f);

// Variable-node step under the all-zero assumption: CDF of X1 + X2 for iid
// X ~ F, by discrete convolution of density increments; mass beyond the grid
// folds into the end points.
DiscretizedCdf cdf_evolve_odd(const DiscretizedCdf& f);

// Density-evolution bias: evolve the channel CDF along each subchannel's
// index bits (most significant bit first: 0 -> check step, 1 -> sum step,
// shared prefixes computed once), integrate each negative tail, and
// accumulate prefix sums. The grid widens automatically (up to a factor 16)
// when off-grid mass exceeds the tolerance; std::runtime_error if even the
// widest grid overflows.
BiasTable bias_de(unsigned m, double sigma, const GridParams& grid = {});

// Genie Monte-Carlo bias: transmit the all-zero codeword `frames` times,
// follow the correct path, and average the penalty prefix sums. std_error
// holds the standard error of each Psi(phase) estimate.
struct McBiasResult {
    BiasTable table;
    std::vector<double> std_error;  // n + 1 entries, [0] = 0
};
McBiasResult bias_mc(unsigned m, double sigma, std::size_t frames, std::uint64_t seed);

}  // namespace polarseq
