#include "polarseq/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <thread>

#include "polarseq/channel.hpp"
#include "polarseq/decoders.hpp"

namespace polarseq {

namespace {

constexpr std::size_t kBatch = 256;

struct Totals {
    std::uint64_t frames = 0;
    std::uint64_t frame_errors = 0;
    std::uint64_t bit_errors = 0;
    std::uint64_t abandoned = 0;
    std::uint64_t iterations = 0;
    std::uint64_t ops = 0;
    std::uint64_t peak_queue = 0;

    void add(const Totals& o) {
        frames += o.frames;
        frame_errors += o.frame_errors;
        bit_errors += o.bit_errors;
        abandoned += o.abandoned;
        iterations += o.iterations;
        ops += o.ops;
        peak_queue += o.peak_queue;
    }
};

void validate(const Campaign& c) {
    if (c.spec == nullptr) throw std::invalid_argument("campaign: no code spec");
    if (c.spec->k() == 0)
        throw std::invalid_argument("campaign: Eb/N0 is undefined for a rate-0 code");
    if (c.snr_db.empty()) throw std::invalid_argument("campaign: SNR list is empty");
    if (c.min_frame_errors == 0 || c.max_frames == 0)
        throw std::invalid_argument("campaign: stop rule must be positive");
    if (c.workers == 0) throw std::invalid_argument("campaign: worker count must be positive");
    const double rate = static_cast<double>(c.spec->k()) / static_cast<double>(c.spec->n());
    switch (c.decoder) {
        case DecoderKind::sc:
            break;
        case DecoderKind::scl:
            if (c.list_size < 1) throw std::invalid_argument("campaign: list size must be >= 1");
            break;
        case DecoderKind::seq:
            if (c.visit_budget < 1)
                throw std::invalid_argument("campaign: visit budget must be >= 1");
            if (c.queue_capacity < 2)
                throw std::invalid_argument("campaign: queue capacity must be >= 2");
            if (c.bias.size() != c.snr_db.size())
                throw std::invalid_argument(
                    "campaign: the seq decoder needs one bias table per SNR point");
            for (std::size_t i = 0; i < c.snr_db.size(); ++i)
                c.bias[i].ensure_matches(c.spec->m(), eb_n0_to_sigma(c.snr_db[i], rate));
            break;
    }
}

// Simulates frames [lo, hi) of one SNR point into `out`.
void run_frames(const Campaign& c, double sigma, const BiasTable* bias, std::size_t lo,
                std::size_t hi, Totals& out) {
    const CodeSpec& spec = *c.spec;
    const std::size_t k = spec.k();
    const AwgnChannel ch{sigma};
    std::size_t capacity = 1;
    if (c.decoder == DecoderKind::scl) capacity = 2 * c.list_size;
    if (c.decoder == DecoderKind::seq) capacity = c.queue_capacity;
    Workspace ws(spec.m(), capacity);
    std::vector<std::uint8_t> info(k);
    for (std::size_t f = lo; f < hi; ++f) {
        std::mt19937_64 rng = frame_rng(c.master_seed, f);
        for (std::size_t b = 0; b < k; ++b) info[b] = static_cast<std::uint8_t>(rng() & 1u);
        const std::vector<std::uint8_t> cw = spec.encode(info);
        const std::vector<double> llrs = llr(transmit(cw, ch, rng), ch);

        DecodeResult r;
        switch (c.decoder) {
            case DecoderKind::sc:
                r = sc_decode_with(ws, llrs, spec);
                break;
            case DecoderKind::scl:
                r = scl_decode_with(ws, llrs, spec, c.list_size);
                break;
            case DecoderKind::seq: {
                SeqConfig cfg{c.visit_budget, c.queue_capacity, bias, nullptr};
                r = seq_decode_with(ws, llrs, spec, cfg);
                break;
            }
        }

        ++out.frames;
        if (r.status == DecodeStatus::abandoned) {
            ++out.abandoned;
            ++out.frame_errors;
            out.bit_errors += k;
        } else {
            if (r.codeword != cw) ++out.frame_errors;
            for (std::size_t b = 0; b < k; ++b)
                if (r.info_estimate[b] != info[b]) ++out.bit_errors;
        }
        out.iterations += r.stats.iterations;
        out.ops += r.stats.total_ops();
        out.peak_queue += r.stats.peak_queue;
    }
}

SnrResult simulate_point(const Campaign& c, std::size_t snr_index) {
    const double rate =
        static_cast<double>(c.spec->k()) / static_cast<double>(c.spec->n());
    const double sigma = eb_n0_to_sigma(c.snr_db[snr_index], rate);
    const BiasTable* bias = c.decoder == DecoderKind::seq ? &c.bias[snr_index] : nullptr;

    Totals total;
    while (total.frames < c.max_frames && total.frame_errors < c.min_frame_errors) {
        const std::size_t lo = total.frames;
        const std::size_t hi = std::min<std::size_t>(lo + kBatch, c.max_frames);
        const std::size_t span = hi - lo;
        const std::size_t workers = std::min<std::size_t>(c.workers, span);
        if (workers <= 1) {
            run_frames(c, sigma, bias, lo, hi, total);
        } else {
            std::vector<Totals> parts(workers);
            std::vector<std::thread> pool;
            const std::size_t chunk = (span + workers - 1) / workers;
            for (std::size_t w = 0; w < workers; ++w) {
                const std::size_t wlo = lo + w * chunk;
                const std::size_t whi = std::min(hi, wlo + chunk);
                if (wlo >= whi) break;
                pool.emplace_back(run_frames, std::cref(c), sigma, bias, wlo, whi,
                                  std::ref(parts[w]));
            }
            for (std::thread& t : pool) t.join();
            for (const Totals& p : parts) total.add(p);
        }
    }

    SnrResult row;
    row.snr_db = c.snr_db[snr_index];
    row.frames = total.frames;
    row.frame_errors = total.frame_errors;
    row.bit_errors = total.bit_errors;
    row.abandoned = total.abandoned;
    const auto frames = static_cast<double>(total.frames);
    row.fer = static_cast<double>(total.frame_errors) / frames;
    const std::size_t k = c.spec->k();
    row.ber = k == 0 ? 0.0
                     : static_cast<double>(total.bit_errors) /
                           (frames * static_cast<double>(k));
    row.fer_sigma = std::sqrt(row.fer * (1.0 - row.fer) / frames);
    row.avg_iterations = static_cast<double>(total.iterations) / frames;
    row.avg_ops = static_cast<double>(total.ops) / frames;
    row.avg_peak_queue = static_cast<double>(total.peak_queue) / frames;
    return row;
}

std::string format_g6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

}  // namespace

SimReport run_campaign(const Campaign& campaign) {
    validate(campaign);
    SimReport report;
    for (std::size_t i = 0; i < campaign.snr_db.size(); ++i)
        report.rows.push_back(simulate_point(campaign, i));
    return report;
}

std::string emit_csv(const SimReport& report) {
    std::string out = "snr_db,frames,fer,ber,avg_iters,avg_ops,avg_peak_pq,abandoned\n";
    for (const SnrResult& r : report.rows) {
        out += format_g6(r.snr_db) + "," + std::to_string(r.frames) + "," + format_g6(r.fer) +
               "," + format_g6(r.ber) + "," + format_g6(r.avg_iterations) + "," +
               format_g6(r.avg_ops) + "," + format_g6(r.avg_peak_queue) + "," +
               std::to_string(r.abandoned) + "\n";
    }
    return out;
}

namespace {

// Nodes and Christoffel weights of Gauss-Hermite quadrature (weight e^{-t^2})
// from the orthonormal Hermite recurrence: sign-change scan, then bisection.
struct HermiteRule {
    std::vector<double> nodes, weights;
};

double hermite_p(int n, double t, std::vector<double>* all = nullptr) {
    double pm1 = 0.0;
    double p = std::pow(std::acos(-1.0), -0.25);
    if (all) all->assign(1, p);
    for (int j = 0; j < n; ++j) {
        const double next =
            t * std::sqrt(2.0 / (j + 1)) * p - std::sqrt(static_cast<double>(j) / (j + 1)) * pm1;
        pm1 = p;
        p = next;
        if (all) all->push_back(p);
    }
    return p;
}

HermiteRule hermite_rule(int n) {
    HermiteRule rule;
    const double reach = std::sqrt(2.0 * n + 1.0) + 2.0;
    const int scan = 200 * n;
    double prev_t = -reach, prev_v = hermite_p(n, prev_t);
    for (int s = 1; s <= scan; ++s) {
        const double t = -reach + 2.0 * reach * s / scan;
        const double v = hermite_p(n, t);
        if ((prev_v < 0.0) != (v < 0.0)) {
            double a = prev_t, b = t, fa = prev_v;
            for (int it = 0; it < 80; ++it) {
                const double mid = 0.5 * (a + b);
                const double fm = hermite_p(n, mid);
                if ((fa < 0.0) != (fm < 0.0)) {
                    b = mid;
                } else {
                    a = mid;
                    fa = fm;
                }
            }
            const double root = 0.5 * (a + b);
            std::vector<double> values;
            hermite_p(n, root, &values);
            double norm = 0.0;
            for (int j = 0; j < n; ++j) norm += values[j] * values[j];
            rule.nodes.push_back(root);
            rule.weights.push_back(1.0 / norm);
        }
        prev_t = t;
        prev_v = v;
    }
    return rule;
}

}  // namespace

ChannelCV bi_awgn_cv(double sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
    static const HermiteRule rule = hermite_rule(64);
    // Y = 1 + sigma * N(0,1); information density
    // i(Y) = 1 - log2(1 + exp(-2Y/sigma^2)).
    const double log2e = 1.0 / std::log(2.0);
    double mean = 0.0, second = 0.0;
    const double inv_sqrt_pi = 1.0 / std::sqrt(std::acos(-1.0));
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
        const double y = 1.0 + sigma * std::sqrt(2.0) * rule.nodes[j];
        const double arg = -2.0 * y / (sigma * sigma);
        // log(1 + e^arg) without overflow for large positive arg.
        const double softplus = arg > 0.0 ? arg + std::log1p(std::exp(-arg))
                                          : std::log1p(std::exp(arg));
        const double density = 1.0 - log2e * softplus;
        const double w = rule.weights[j] * inv_sqrt_pi;
        mean += w * density;
        second += w * density * density;
    }
    ChannelCV cv;
    cv.capacity = mean;
    cv.dispersion = std::max(0.0, second - mean * mean);
    return cv;
}

double normal_approximation_fer(std::size_t n, std::size_t k, double ebn0_db) {
    if (n == 0 || k == 0 || k > n) throw std::invalid_argument("invalid (n, k)");
    const double rate = static_cast<double>(k) / static_cast<double>(n);
    const double sigma = eb_n0_to_sigma(ebn0_db, rate);
    const ChannelCV cv = bi_awgn_cv(sigma);
    const double excess = static_cast<double>(n) * cv.capacity - static_cast<double>(k) +
                          0.5 * std::log2(static_cast<double>(n));
    const double spread = std::sqrt(static_cast<double>(n) * cv.dispersion);
    if (spread < 1e-12) return excess > 0.0 ? 0.0 : 1.0;
    return 0.5 * std::erfc(excess / spread / std::sqrt(2.0));
}

}  // namespace polarseq
