#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace polarseq {

// Tally of the decoder's real-valued work: additions and comparisons in the
// successive-cancellation kernels and score updates, plus comparator calls
// made by the priority queue. Integer/bit bookkeeping is not counted.
struct OpCounters {
    std::uint64_t additions = 0;
    std::uint64_t comparisons = 0;
    std::uint64_t queue_comparisons = 0;

    std::uint64_t total() const { return additions + comparisons + queue_comparisons; }
};

// Min-sum check-node kernel: sgn(a) sgn(b) min(|a|, |b|).
double min_sum_q(double a, double b);

// Variable-node kernel: (-1)^v a + b.
double min_sum_p(std::uint8_t v, double a, double b);

// Score penalty for deciding bit v against LLR S: 0 when the sign of S
// matches (-1)^v, else -|S|. S = 0 matches either bit (penalty 0).
double penalty_tau(double S, std::uint8_t v);

using PathHandle = std::uint32_t;

// Successive-cancellation computation fabric shared by all decoders.
//
// Layer lambda in [0, m] stores per path one array of 2^(m-lambda) LLRs and
// one co-located array of 2^(m-lambda) partial-sum bits, handled as a single
// reference-counted slot. Clones share slots; writable access to a shared
// slot binds a fresh slot WITHOUT copying data. That is sound because every
// region is fully rewritten before it is read again: at each phase exactly
// one layer holds live partial sums, and the computation order below reads
// it before any write splits it.
//
// Per path the partial-sum storage totals sum_lambda 2^(m-lambda) =
// 2^(m+1) - 1 cells, half of a layout keeping separate even/odd copies
// (2 * 2^(m-lambda) per layer).
class Workspace {
   public:
    Workspace(unsigned m, std::size_t capacity);

    unsigned m() const { return m_; }
    std::size_t n() const { return std::size_t{1} << m_; }
    std::size_t capacity() const { return capacity_; }
    std::size_t active_paths() const { return active_count_; }

    // Reset all state, activate the first path, and load channel LLRs into
    // its layer-0 slot. dyn_rows sizes the dynamic-freeze parity mask.
    PathHandle init_root(const std::vector<double>& llrs, std::size_t dyn_rows);

    // Share all slots with l; copy phase, penalty, and parity mask.
    PathHandle clone_path(PathHandle l);
    void kill_path(PathHandle l);

    // LLR of the next input symbol: refreshes layers from the odd-split
    // layer (variable-node step reading that layer's live partial sums)
    // down to layer m (check-node steps), and returns S_m. Counts one
    // addition per variable-node kernel and one comparison per check-node
    // kernel.
    double calc_S(PathHandle l, std::size_t phi);

    // Record the symbol decision of phase phi. Lands in the co-located slot
    // of layer m - ruler(phi+1) at offset 2^ruler(phi+1) - 1 for odd phi
    // (offset 0 for even phi), where ruler(x) is the exponent of the
    // largest power of two dividing x.
    void write_bit(PathHandle l, std::size_t phi, std::uint8_t v);

    // Propagate partial sums after an odd phase: XOR-combine the bits held
    // at layers (m - ruler(phi+1), m] down into the landing layer's region.
    void update_C(PathHandle l, std::size_t phi);

    // Layer-0 partial sums, i.e. the codeword once phase n-1 completed.
    std::vector<std::uint8_t> codeword(PathHandle l) const;

    // Per-path decoder state, stored here so clones carry it automatically.
    std::size_t& phase(PathHandle l) { return paths_[l].phase; }
    std::size_t phase(PathHandle l) const { return paths_[l].phase; }
    double& penalty(PathHandle l) { return paths_[l].penalty; }
    double penalty(PathHandle l) const { return paths_[l].penalty; }
    std::vector<std::uint64_t>& dyn_mask(PathHandle l) { return paths_[l].mask; }
    const std::vector<std::uint64_t>& dyn_mask(PathHandle l) const { return paths_[l].mask; }

    OpCounters& counters() { return counters_; }
    const OpCounters& counters() const { return counters_; }

    // Introspection for tests.
    std::uint32_t bound_slot(PathHandle l, unsigned lambda) const { return paths_[l].slot[lambda]; }
    std::uint32_t slot_ref(unsigned lambda, std::uint32_t slot) const { return ref_[lambda][slot]; }
    std::size_t partial_sum_cells_per_path() const;
    // Verify refcount bookkeeping: every active path binds one slot per
    // layer and per-slot binding counts equal stored reference counts.
    void check_invariants() const;

   private:
    struct PathState {
        bool active = false;
        std::size_t phase = 0;
        double penalty = 0.0;
        std::vector<std::uint32_t> slot;  // per layer
        std::vector<std::uint64_t> mask;
    };

    std::size_t stride(unsigned lambda) const { return std::size_t{1} << (m_ - lambda); }
    PathHandle alloc_path();
    std::uint32_t alloc_slot(unsigned lambda);
    void release_slot(unsigned lambda, std::uint32_t slot);
    // Resolve writable access to the joint slot of (l, lambda): exclusive
    // slots are returned as-is; shared slots are replaced by a fresh slot
    // without copying.
    std::uint32_t writable_slot(PathHandle l, unsigned lambda);
    double* llr_at(unsigned lambda, std::uint32_t slot) { return llr_pool_[lambda].data() + slot * stride(lambda); }
    const double* llr_at(unsigned lambda, std::uint32_t slot) const {
        return llr_pool_[lambda].data() + slot * stride(lambda);
    }
    std::uint8_t* c_at(unsigned lambda, std::uint32_t slot) { return c_pool_[lambda].data() + slot * stride(lambda); }
    const std::uint8_t* c_at(unsigned lambda, std::uint32_t slot) const {
        return c_pool_[lambda].data() + slot * stride(lambda);
    }

    unsigned m_;
    std::size_t capacity_;
    std::size_t active_count_ = 0;
    OpCounters counters_;
    std::vector<PathState> paths_;
    std::vector<PathHandle> free_paths_;
    // Per layer: slot-granular pools and bookkeeping.
    std::vector<std::vector<double>> llr_pool_;
    std::vector<std::vector<std::uint8_t>> c_pool_;
    std::vector<std::vector<std::uint32_t>> ref_;
    std::vector<std::vector<std::uint32_t>> free_slots_;
    std::vector<std::uint32_t> slots_used_;
};

// Genie-aided successive cancellation assuming the all-zero input: for each
// phase, the returned value is S_m at that phase with every earlier symbol
// forced to 0. Used for reliability estimation and bias measurement.
std::vector<double> genie_sc_llrs(Workspace& ws, const std::vector<double>& llrs);

}  // namespace polarseq
