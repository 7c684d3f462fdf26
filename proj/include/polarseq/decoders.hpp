#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "polarseq/bias.hpp"
#include "polarseq/code_spec.hpp"
#include "polarseq/datapath.hpp"
#include "polarseq/pqueue.hpp"

namespace polarseq {

enum class DecodeStatus { decoded, abandoned };

struct DecodeStats {
    // Number of queue extractions that processed a symbol (the final
    // extraction of a full-length path terminates the decoder and is not
    // counted). Equals the sum of pops_per_phase.
    std::size_t iterations = 0;
    std::vector<std::uint32_t> pops_per_phase;  // t_phi; list width per phase for scl
    std::uint64_t additions = 0;
    std::uint64_t comparisons = 0;
    std::uint64_t queue_comparisons = 0;
    std::size_t peak_queue = 0;  // max queued paths (widest list for scl)
    std::size_t killed = 0;      // paths discarded before reaching full length

    std::uint64_t total_ops() const { return additions + comparisons + queue_comparisons; }
};

struct DecodeResult {
    std::vector<std::uint8_t> codeword;       // empty when abandoned
    std::vector<std::uint8_t> info_estimate;  // empty when abandoned
    DecodeStats stats;
    DecodeStatus status = DecodeStatus::decoded;
};

// One queue extraction as observed through SeqConfig::trace.
struct PopRecord {
    std::size_t phase = 0;
    double score = 0.0;
    double penalty = 0.0;
};

struct SeqConfig {
    std::size_t L = 1;                        // processed-pop budget per phase
    std::size_t D = 2;                        // bound on simultaneously live paths
    const BiasTable* bias = nullptr;          // n + 1 score offsets
    std::vector<PopRecord>* trace = nullptr;  // optional per-extraction observer
};

// Parity required of the frozen symbol at `phase`: XOR of the decided bits
// this row's column list selects, maintained incrementally in the path's
// bitmask (bit j = running parity of constraint row j).
template <class WS>
std::uint8_t evaluate_dyn_frozen(const WS& ws, const CodeSpec& spec, PathHandle l,
                                 std::size_t phase) {
    const int row = spec.row_of(phase);
    if (row < 0) throw std::invalid_argument("evaluate_dyn_frozen: phase carries an information bit");
    const auto& mask = ws.dyn_mask(l);
    return static_cast<std::uint8_t>((mask[static_cast<std::size_t>(row) >> 6] >> (row & 63)) & 1u);
}

// Record the decision u[phase] = v by flipping the parity of every row whose
// column list contains `phase`.
template <class WS>
void update_dyn_frozen(WS& ws, const CodeSpec& spec, PathHandle l, std::size_t phase,
                       std::uint8_t v) {
    if (!v) return;
    auto& mask = ws.dyn_mask(l);
    for (std::uint32_t row : spec.rows_listing(phase))
        mask[row >> 6] ^= std::uint64_t{1} << (row & 63);
}

namespace detail {

inline void check_llrs(const std::vector<double>& llrs, const CodeSpec& spec) {
    if (llrs.size() != spec.n())
        throw std::invalid_argument("decoder: LLR length does not match the code length");
}

inline DecodeStats counter_delta(const OpCounters& end, const OpCounters& start) {
    DecodeStats s;
    s.additions = end.additions - start.additions;
    s.comparisons = end.comparisons - start.comparisons;
    s.queue_comparisons = end.queue_comparisons - start.queue_comparisons;
    return s;
}

}  // namespace detail

// Plain successive cancellation: one pass, frozen symbols forced by their
// constraints, information symbols decided by the sign of the phase LLR.
template <class WS>
DecodeResult sc_decode_with(WS& ws, const std::vector<double>& llrs, const CodeSpec& spec) {
    detail::check_llrs(llrs, spec);
    const std::size_t n = spec.n();
    const PathHandle l = ws.init_root(llrs, spec.rows().size());
    const OpCounters start = ws.counters();
    for (std::size_t phi = 0; phi < n; ++phi) {
        const double s = ws.calc_S(l, phi);
        std::uint8_t v;
        if (spec.is_frozen(phi)) {
            v = evaluate_dyn_frozen(ws, spec, l, phi);
        } else {
            ws.counters().comparisons += 1;  // hard decision on the sign
            v = s < 0.0 ? 1 : 0;
        }
        ws.write_bit(l, phi, v);
        update_dyn_frozen(ws, spec, l, phi, v);
        if (phi & 1u) ws.update_C(l, phi);
        ws.phase(l) = phi + 1;
    }
    DecodeResult out;
    out.codeword = ws.codeword(l);
    out.info_estimate = spec.extract_info(out.codeword);
    out.stats = detail::counter_delta(ws.counters(), start);
    out.stats.iterations = n;
    out.stats.pops_per_phase.assign(n, 1);
    out.stats.peak_queue = 1;
    return out;
}

inline DecodeResult sc_decode(const std::vector<double>& llrs, const CodeSpec& spec) {
    Workspace ws(spec.m(), 1);
    return sc_decode_with(ws, llrs, spec);
}

// Min-sum successive-cancellation list decoding: at every information phase
// each path forks into both bit choices, and the list is pruned to the
// list_size best accumulated penalties R. Ties prune in favor of earlier
// creation order, then the sign-following child. Returns the best-R survivor.
template <class WS>
DecodeResult scl_decode_with(WS& ws, const std::vector<double>& llrs, const CodeSpec& spec,
                             std::size_t list_size) {
    detail::check_llrs(llrs, spec);
    if (list_size < 1) throw std::invalid_argument("scl_decode: list size must be positive");
    const std::size_t n = spec.n();

    struct Member {
        PathHandle h;
        double R;
    };
    std::vector<Member> list{{ws.init_root(llrs, spec.rows().size()), 0.0}};
    const OpCounters start = ws.counters();
    DecodeResult out;
    out.stats.pops_per_phase.assign(n, 0);
    out.stats.peak_queue = 1;

    std::vector<double> s_of;
    std::vector<std::uint8_t> keep_same, keep_flip;
    for (std::size_t phi = 0; phi < n; ++phi) {
        out.stats.pops_per_phase[phi] = static_cast<std::uint32_t>(list.size());
        if (spec.is_frozen(phi)) {
            for (Member& mem : list) {
                const double s = ws.calc_S(mem.h, phi);
                const std::uint8_t v = evaluate_dyn_frozen(ws, spec, mem.h, phi);
                ws.counters().comparisons += 1;  // penalty sign test
                const double t = penalty_tau(s, v);
                if (t != 0.0) {
                    mem.R += t;
                    ws.counters().additions += 1;
                }
                ws.write_bit(mem.h, phi, v);
                update_dyn_frozen(ws, spec, mem.h, phi, v);
                if (phi & 1u) ws.update_C(mem.h, phi);
                ws.phase(mem.h) = phi + 1;
            }
            continue;
        }

        // Fork every path; the sign-following child keeps R, the other pays
        // the magnitude of the phase LLR.
        s_of.assign(list.size(), 0.0);
        for (std::size_t i = 0; i < list.size(); ++i) {
            s_of[i] = ws.calc_S(list[i].h, phi);
            ws.counters().comparisons += 1;  // hard decision
            ws.counters().additions += 1;    // penalized-child metric
        }
        keep_same.assign(list.size(), 1);
        keep_flip.assign(list.size(), 1);
        if (2 * list.size() > list_size) {
            struct Cand {
                double R;
                std::uint32_t parent;
                std::uint8_t flip;
            };
            std::vector<Cand> cands;
            cands.reserve(2 * list.size());
            for (std::size_t i = 0; i < list.size(); ++i) {
                cands.push_back({list[i].R, static_cast<std::uint32_t>(i), 0});
                cands.push_back({list[i].R - std::fabs(s_of[i]), static_cast<std::uint32_t>(i), 1});
            }
            std::sort(cands.begin(), cands.end(), [&](const Cand& a, const Cand& b) {
                ws.counters().comparisons += 1;
                if (a.R != b.R) return a.R > b.R;
                if (a.parent != b.parent) return a.parent < b.parent;
                return a.flip < b.flip;
            });
            keep_same.assign(list.size(), 0);
            keep_flip.assign(list.size(), 0);
            for (std::size_t c = 0; c < list_size; ++c)
                (cands[c].flip ? keep_flip : keep_same)[cands[c].parent] = 1;
        }

        std::vector<Member> next;
        next.reserve(std::min(2 * list.size(), list_size));
        for (std::size_t i = 0; i < list.size(); ++i) {
            const PathHandle h = list[i].h;
            if (!keep_same[i] && !keep_flip[i]) {
                ws.kill_path(h);
                out.stats.killed += 1;
                continue;
            }
            const std::uint8_t hard = s_of[i] < 0.0 ? 1 : 0;
            const double r_flip = list[i].R - std::fabs(s_of[i]);
            if (keep_same[i] && keep_flip[i]) {
                ws.write_bit(h, phi, hard);
                const PathHandle sib = ws.clone_path(h);
                ws.write_bit(sib, phi, static_cast<std::uint8_t>(1u ^ hard));
                update_dyn_frozen(ws, spec, h, phi, hard);
                update_dyn_frozen(ws, spec, sib, phi, static_cast<std::uint8_t>(1u ^ hard));
                if (phi & 1u) {
                    ws.update_C(h, phi);
                    ws.update_C(sib, phi);
                }
                ws.phase(h) = phi + 1;
                ws.phase(sib) = phi + 1;
                next.push_back({h, list[i].R});
                next.push_back({sib, r_flip});
            } else {
                const std::uint8_t v = keep_same[i] ? hard : static_cast<std::uint8_t>(1u ^ hard);
                ws.write_bit(h, phi, v);
                update_dyn_frozen(ws, spec, h, phi, v);
                if (phi & 1u) ws.update_C(h, phi);
                ws.phase(h) = phi + 1;
                next.push_back({h, keep_same[i] ? list[i].R : r_flip});
            }
        }
        list = std::move(next);
        out.stats.peak_queue = std::max(out.stats.peak_queue, list.size());
    }

    std::size_t best = 0;
    for (std::size_t i = 1; i < list.size(); ++i) {
        ws.counters().comparisons += 1;
        if (list[i].R > list[best].R) best = i;
    }
    out.codeword = ws.codeword(list[best].h);
    out.info_estimate = spec.extract_info(out.codeword);
    const DecodeStats ops = detail::counter_delta(ws.counters(), start);
    out.stats.additions = ops.additions;
    out.stats.comparisons = ops.comparisons;
    out.stats.queue_comparisons = ops.queue_comparisons;
    out.stats.iterations = n;
    return out;
}

inline DecodeResult scl_decode(const std::vector<double>& llrs, const CodeSpec& spec,
                               std::size_t list_size) {
    Workspace ws(spec.m(), 2 * list_size);
    return scl_decode_with(ws, llrs, spec, list_size);
}

// Stack decoding: a bounded priority queue of partial paths ordered by
// bias-corrected score M = R - Psi(phase). Each loop extracts the best
// entry; a full-length extraction terminates. Information phases fork the
// path (evicting the worst queued path if space is short); once a phase has
// been processed L times, every queued path at that depth or shallower is
// discarded.
//
// The child whose penalty did not change is kept out of the heap until the
// next extraction: with a nonincreasing bias its score is at least its
// parent's, hence at least every queued score, so it pops without any
// comparator call. Exact score ties between that child and a queued entry
// resolve in the child's favor (a strict all-in-heap discipline would prefer
// the deeper queued entry); with continuous-valued LLRs such ties have
// probability zero. Penalized children fall back to one counted comparison
// against the heap front, or a full push.
template <class WS>
DecodeResult seq_decode_with(WS& ws, const std::vector<double>& llrs, const CodeSpec& spec,
                             const SeqConfig& cfg) {
    detail::check_llrs(llrs, spec);
    if (cfg.L < 1) throw std::invalid_argument("seq_decode: visit budget L must be at least 1");
    if (cfg.D < 2) throw std::invalid_argument("seq_decode: capacity D must be at least 2");
    if (cfg.bias == nullptr) throw std::invalid_argument("seq_decode: bias table required");
    const std::size_t n = spec.n();
    if (cfg.bias->m != spec.m() || cfg.bias->values.size() != n + 1)
        throw std::invalid_argument("seq_decode: bias table does not match the code length");
    const std::vector<double>& psi = cfg.bias->values;

    const PathHandle root = ws.init_root(llrs, spec.rows().size());
    const OpCounters start = ws.counters();
    PathQueue pq(cfg.D, &ws.counters().queue_comparisons);
    DecodeResult out;
    out.status = DecodeStatus::abandoned;
    out.stats.pops_per_phase.assign(n, 0);

    pq.push(root, 0.0 - psi[0], 0);
    PathQueue::Entry held{};
    bool holding = false;
    bool held_dominant = false;
    std::size_t peak = pq.size();
    const std::size_t budget = cfg.L * n;

    auto pop_next = [&]() -> std::optional<PathQueue::Entry> {
        if (holding) {
            holding = false;
            if (held_dominant || pq.empty()) return held;
            if (pq.higher(held, pq.peek_max())) return held;
            pq.push_entry(held);
            return pq.pop_max();
        }
        if (pq.empty()) return std::nullopt;
        return pq.pop_max();
    };

    while (true) {
        const std::optional<PathQueue::Entry> popped = pop_next();
        if (!popped) break;  // queue exhausted: give up on the frame
        const PathHandle l = popped->path;
        const std::size_t phi = ws.phase(l);
        if (cfg.trace) cfg.trace->push_back({phi, popped->score, ws.penalty(l)});
        if (phi == n) {
            out.codeword = ws.codeword(l);
            out.info_estimate = spec.extract_info(out.codeword);
            out.status = DecodeStatus::decoded;
            break;
        }
        out.stats.pops_per_phase[phi] += 1;
        out.stats.iterations += 1;
        if (out.stats.iterations > budget)
            throw std::logic_error("seq_decode: processed pops exceed the L*n bound");

        const double s = ws.calc_S(l, phi);
        const double next_psi = psi[phi + 1];
        // Knowable offline from the table alone, so not a counted comparison.
        const bool psi_steps_down = next_psi <= psi[phi];
        if (spec.is_frozen(phi)) {
            const std::uint8_t v = evaluate_dyn_frozen(ws, spec, l, phi);
            ws.write_bit(l, phi, v);
            update_dyn_frozen(ws, spec, l, phi, v);
            ws.counters().comparisons += 1;  // penalty sign test
            const double t = penalty_tau(s, v);
            bool dominant = psi_steps_down;
            if (t != 0.0) {
                ws.penalty(l) += t;
                ws.counters().additions += 1;
                dominant = false;
            }
            if (phi & 1u) ws.update_C(l, phi);
            ws.phase(l) = phi + 1;
            held = {ws.penalty(l) - next_psi, static_cast<std::uint32_t>(phi + 1), pq.next_seq(), l};
            holding = true;
            held_dominant = dominant;
        } else {
            if (ws.active_paths() >= cfg.D - 1 && !pq.empty()) {
                const PathQueue::Entry victim = pq.evict_min();
                ws.kill_path(victim.path);
                out.stats.killed += 1;
            }
            ws.counters().comparisons += 1;  // hard decision
            const std::uint8_t hard = s < 0.0 ? 1 : 0;
            ws.write_bit(l, phi, hard);
            const PathHandle sib = ws.clone_path(l);
            ws.write_bit(sib, phi, static_cast<std::uint8_t>(1u ^ hard));
            update_dyn_frozen(ws, spec, l, phi, hard);
            update_dyn_frozen(ws, spec, sib, phi, static_cast<std::uint8_t>(1u ^ hard));
            ws.counters().additions += 1;  // penalized-child metric
            ws.penalty(sib) = ws.penalty(l) - std::fabs(s);
            if (phi & 1u) {
                ws.update_C(l, phi);
                ws.update_C(sib, phi);
            }
            ws.phase(l) = phi + 1;
            ws.phase(sib) = phi + 1;
            held = {ws.penalty(l) - next_psi, static_cast<std::uint32_t>(phi + 1), pq.next_seq(), l};
            holding = true;
            held_dominant = psi_steps_down;
            pq.push(sib, ws.penalty(sib) - next_psi, static_cast<std::uint32_t>(phi + 1));
        }
        peak = std::max(peak, pq.size() + (holding ? 1 : 0));

        // Depth purge: this phase's visit budget is spent, so drop every
        // queued path that has not advanced past it. The children just
        // created sit one phase deeper and survive.
        if (out.stats.pops_per_phase[phi] >= cfg.L) {
            for (const PathQueue::Entry& e : pq.remove_phase_at_most(static_cast<std::uint32_t>(phi))) {
                ws.kill_path(e.path);
                out.stats.killed += 1;
            }
        }
    }

    const DecodeStats ops = detail::counter_delta(ws.counters(), start);
    out.stats.additions = ops.additions;
    out.stats.comparisons = ops.comparisons;
    out.stats.queue_comparisons = ops.queue_comparisons;
    out.stats.peak_queue = peak;
    return out;
}

inline DecodeResult seq_decode(const std::vector<double>& llrs, const CodeSpec& spec,
                               const SeqConfig& cfg) {
    Workspace ws(spec.m(), cfg.D);
    return seq_decode_with(ws, llrs, spec, cfg);
}

}  // namespace polarseq
