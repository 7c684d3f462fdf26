#include "polarseq/bias.hpp"

#include "polarseq/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "polarseq/channel.hpp"
#include "polarseq/datapath.hpp"

namespace polarseq {

namespace {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

double DiscretizedCdf::at(double x) const {
    if (values.empty()) throw std::logic_error("empty CDF");
    if (x <= lo) return values.front();
    const double pos = (x - lo) / step;
    const auto idx = static_cast<std::size_t>(pos);
    if (idx + 1 >= values.size()) return values.back();
    const double frac = pos - static_cast<double>(idx);
    return values[idx] + frac * (values[idx + 1] - values[idx]);
}

BiasTable BiasTable::zero(unsigned m, double sigma) {
    BiasTable t;
    t.m = m;
    t.sigma = sigma;
    t.method = "zero";
    t.values.assign((std::size_t{1} << m) + 1, 0.0);
    return t;
}

void BiasTable::ensure_matches(unsigned m_expected, double sigma_expected) const {
    if (m != m_expected)
        throw std::invalid_argument("bias table built for length " +
                                    std::to_string(std::size_t{1} << m) + ", decoder needs length " +
                                    std::to_string(std::size_t{1} << m_expected));
    const double tol = 1e-9 * std::max(std::abs(sigma), std::abs(sigma_expected));
    if (std::abs(sigma - sigma_expected) > tol)
        throw std::invalid_argument("bias table built for sigma " + format_double(sigma) +
                                    ", decoder runs at sigma " + format_double(sigma_expected));
}

std::string BiasTable::to_text() const {
    std::string out = "bias v1 m=" + std::to_string(m) + " sigma=" + format_double(sigma) +
                      " method=" + method + "\n";
    for (std::size_t phi = 0; phi < values.size(); ++phi)
        out += std::to_string(phi) + " " + format_double(values[phi]) + "\n";
    return out;
}

BiasTable BiasTable::from_text(const std::string& text) {
    std::istringstream in(text);
    std::string tag, version, mfield, sfield, methodfield;
    if (!(in >> tag >> version >> mfield >> sfield >> methodfield) || tag != "bias" ||
        version != "v1" || mfield.rfind("m=", 0) != 0 || sfield.rfind("sigma=", 0) != 0 ||
        methodfield.rfind("method=", 0) != 0)
        throw std::invalid_argument("bias table: malformed header");
    BiasTable t;
    try {
        t.m = static_cast<unsigned>(std::stoul(mfield.substr(2)));
        t.sigma = std::stod(sfield.substr(6));
    } catch (const std::exception&) {
        throw std::invalid_argument("bias table: malformed header numbers");
    }
    t.method = methodfield.substr(7);
    const std::size_t count = (std::size_t{1} << t.m) + 1;
    t.values.resize(count);
    for (std::size_t phi = 0; phi < count; ++phi) {
        std::size_t idx = 0;
        double value = 0.0;
        if (!(in >> idx >> value) || idx != phi)
            throw std::invalid_argument("bias table: expected entry for phase " + std::to_string(phi));
        t.values[phi] = value;
    }
    std::string rest;
    if (in >> rest) throw std::invalid_argument("bias table: trailing content");
    if (t.values[0] != 0.0) throw std::invalid_argument("bias table: value at phase 0 must be 0");
    for (std::size_t phi = 0; phi + 1 < count; ++phi)
        if (t.values[phi + 1] > t.values[phi])
            throw std::invalid_argument("bias table: values must be nonincreasing");
    return t;
}

void BiasTable::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << to_text();
    if (!out) throw IoError("write failed: " + path);
}

BiasTable BiasTable::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open for reading: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_text(buf.str());
}

namespace {

// Symmetric grid with an exact center point: x_i = (i - K) * step for
// i in [0, 2K]. x_K = 0 and x_{2K-i} = -x_i hold exactly.
std::size_t half_points(const GridParams& grid) {
    if (grid.step <= 0.0 || grid.half_width <= 0.0)
        throw std::invalid_argument("grid parameters must be positive");
    const auto k = static_cast<std::size_t>(std::llround(grid.half_width / grid.step));
    if (k == 0) throw std::invalid_argument("grid narrower than one step");
    return k;
}

void clamp_monotone(DiscretizedCdf& f) {
    double prev = 0.0;
    for (double& v : f.values) {
        v = std::min(std::max(v, prev), 1.0);
        prev = v;
    }
    // All mass beyond the right edge is folded into the last point.
    f.values.back() = 1.0;
}

}  // namespace

DiscretizedCdf channel_llr_cdf(double sigma, const GridParams& grid) {
    if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
    const std::size_t k = half_points(grid);
    const double mean = 2.0 / (sigma * sigma);
    const double sd = 2.0 / sigma;
    DiscretizedCdf f;
    f.step = grid.step;
    f.lo = -static_cast<double>(k) * grid.step;
    f.values.resize(2 * k + 1);
    // Mass is attributed to the nearest node (cell (x - h/2, x + h/2] to
    // node x), so the point-mass model has no first-order location bias.
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        const double z = (f.x_at(i) + 0.5 * grid.step - mean) / sd;
        f.values[i] = 0.5 * std::erfc(-z / std::sqrt(2.0));
    }
    clamp_monotone(f);
    return f;
}

DiscretizedCdf cdf_evolve_even(const DiscretizedCdf& f) {
    const std::size_t count = f.values.size();
    DiscretizedCdf out;
    out.lo = f.lo;
    out.step = f.step;
    out.values.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double fx = f.values[i];
        // P(X <= -x_i - step): with all mass on grid nodes this is the value
        // one node below the mirror, so a point mass sitting exactly on the
        // magnitude boundary is counted once instead of being dropped.
        const double fmx = count - 1 - i >= 1 ? f.values[count - 2 - i] : 0.0;
        out.values[i] = f.x_at(i) < 0.0 ? 2.0 * fx * (1.0 - fmx)
                                        : 2.0 * fx - fmx * fmx - fx * fx;
    }
    clamp_monotone(out);
    return out;
}

DiscretizedCdf cdf_evolve_odd(const DiscretizedCdf& f) {
    const std::size_t count = f.values.size();
    const std::size_t k = (count - 1) / 2;
    std::vector<double> p(count);
    p[0] = f.values[0];
    for (std::size_t i = 1; i < count; ++i) p[i] = f.values[i] - f.values[i - 1];
    // Sum lands at x_i + x_j = (i + j - 2K) * step; grid index i + j - K,
    // folded to the nearest edge when off-grid.
    std::vector<double> density(count, 0.0);
    for (std::size_t i = 0; i < count; ++i) {
        if (p[i] == 0.0) continue;
        const double pi = p[i];
        for (std::size_t j = 0; j < count; ++j) {
            const std::size_t t = i + j;
            const std::size_t g = t < k ? 0 : std::min(t - k, count - 1);
            density[g] += pi * p[j];
        }
    }
    DiscretizedCdf out;
    out.lo = f.lo;
    out.step = f.step;
    out.values.resize(count);
    double run = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        run += density[i];
        out.values[i] = run;
    }
    clamp_monotone(out);
    return out;
}

BiasTable bias_de(unsigned m, double sigma, const GridParams& grid) {
    const std::size_t n = std::size_t{1} << m;
    for (int widen = 1; widen <= 16; widen *= 2) {
        GridParams attempt = grid;
        attempt.half_width = grid.half_width * widen;
        // Mass touching the left edge corrupts the negative-tail integrals;
        // mass folded at the right edge only shifts large positive scores
        // and leaves every integral intact.
        const auto left_ok = [&attempt](const DiscretizedCdf& f) {
            return f.values.front() <= attempt.tail_tolerance;
        };
        DiscretizedCdf channel = channel_llr_cdf(sigma, attempt);
        if (!left_ok(channel)) continue;

        bool overflow = false;
        std::vector<DiscretizedCdf> level{std::move(channel)};
        for (unsigned d = 1; d <= m && !overflow; ++d) {
            std::vector<DiscretizedCdf> next(std::size_t{1} << d);
            for (std::size_t j = 0; j < level.size() && !overflow; ++j) {
                next[2 * j] = cdf_evolve_even(level[j]);
                next[2 * j + 1] = cdf_evolve_odd(level[j]);
                overflow = !left_ok(next[2 * j]) || !left_ok(next[2 * j + 1]);
            }
            level = std::move(next);
        }
        if (overflow) continue;

        // Leaf phi reads its transform sequence from the most significant
        // index bit down, so level m is indexed by phi directly.
        BiasTable table;
        table.m = m;
        table.sigma = sigma;
        table.method = "de";
        table.values.assign(n + 1, 0.0);
        const std::size_t mid = (level[0].values.size() - 1) / 2;  // x = 0
        for (std::size_t phi = 0; phi < n; ++phi) {
            // Negative-tail integral of the step CDF; equals -E[min(S, 0)]
            // exactly under the point-mass model.
            const std::vector<double>& v = level[phi].values;
            double integral = 0.0;
            for (std::size_t i = 0; i < mid; ++i) integral += v[i];
            integral *= level[phi].step;
            table.values[phi + 1] = table.values[phi] - integral;
        }
        return table;
    }
    throw std::runtime_error("bias_de: probability mass reaches the grid edge even after widening");
}

McBiasResult bias_mc(unsigned m, double sigma, std::size_t frames, std::uint64_t seed) {
    if (frames == 0) throw std::invalid_argument("frames must be at least 1");
    if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
    const std::size_t n = std::size_t{1} << m;
    const AwgnChannel ch{sigma};
    const std::vector<std::uint8_t> zero_cw(n, 0);

    struct Partial {
        std::vector<double> sum, sumsq;
    };
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t workers =
        std::min<std::size_t>({hw, 8, (frames + 2047) / 2048});
    std::vector<Partial> partials(std::max<std::size_t>(workers, 1));
    const auto run_block = [&](std::size_t lo, std::size_t hi, Partial& out) {
        out.sum.assign(n + 1, 0.0);
        out.sumsq.assign(n + 1, 0.0);
        Workspace ws(m, 1);
        for (std::size_t f = lo; f < hi; ++f) {
            std::mt19937_64 rng = frame_rng(seed, f);
            const std::vector<double> llrs = llr(transmit(zero_cw, ch, rng), ch);
            const std::vector<double> s = genie_sc_llrs(ws, llrs);
            double running = 0.0;
            for (std::size_t phi = 0; phi < n; ++phi) {
                running += std::min(0.0, s[phi]);
                out.sum[phi + 1] += running;
                out.sumsq[phi + 1] += running * running;
            }
        }
    };
    if (workers <= 1) {
        run_block(0, frames, partials[0]);
    } else {
        std::vector<std::thread> pool;
        const std::size_t block = (frames + workers - 1) / workers;
        for (std::size_t w = 0; w < workers; ++w) {
            const std::size_t lo = w * block, hi = std::min(frames, lo + block);
            pool.emplace_back(run_block, lo, hi, std::ref(partials[w]));
        }
        for (std::thread& t : pool) t.join();
    }

    McBiasResult result;
    result.table.m = m;
    result.table.sigma = sigma;
    result.table.method = "mc";
    result.table.values.assign(n + 1, 0.0);
    result.std_error.assign(n + 1, 0.0);
    for (std::size_t phi = 1; phi <= n; ++phi) {
        double sum = 0.0, sumsq = 0.0;
        for (const Partial& p : partials) {
            sum += p.sum[phi];
            sumsq += p.sumsq[phi];
        }
        const double mean = sum / static_cast<double>(frames);
        const double var =
            std::max(0.0, sumsq / static_cast<double>(frames) - mean * mean);
        result.table.values[phi] = mean;
        result.std_error[phi] = std::sqrt(var / static_cast<double>(frames));
    }
    return result;
}

}  // namespace polarseq
