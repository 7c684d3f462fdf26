#include "polarseq/datapath.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace polarseq {

double min_sum_q(double a, double b) {
    const double mag = std::fmin(std::fabs(a), std::fabs(b));
    return std::signbit(a) != std::signbit(b) ? -mag : mag;
}

double min_sum_p(std::uint8_t v, double a, double b) { return (v ? -a : a) + b; }

double penalty_tau(double S, std::uint8_t v) {
    if (S == 0.0) return 0.0;
    const bool negative = S < 0.0;
    return negative == (v != 0) ? 0.0 : -std::fabs(S);
}

Workspace::Workspace(unsigned m, std::size_t capacity) : m_(m), capacity_(capacity) {
    if (m_ == 0 || m_ > 30) throw std::invalid_argument("layer count out of range");
    if (capacity_ == 0) throw std::invalid_argument("capacity must be positive");
    llr_pool_.resize(m_ + 1);
    c_pool_.resize(m_ + 1);
    ref_.resize(m_ + 1);
    free_slots_.resize(m_ + 1);
    slots_used_.assign(m_ + 1, 0);
}

PathHandle Workspace::init_root(const std::vector<double>& llrs, std::size_t dyn_rows) {
    if (llrs.size() != n()) throw std::invalid_argument("LLR vector length must equal code length");
    for (std::size_t p = 0; p < paths_.size(); ++p) paths_[p].active = false;
    free_paths_.clear();
    for (std::size_t p = paths_.size(); p > 0; --p) free_paths_.push_back(static_cast<PathHandle>(p - 1));
    for (unsigned lambda = 0; lambda <= m_; ++lambda) {
        free_slots_[lambda].clear();
        slots_used_[lambda] = 0;
    }
    active_count_ = 0;
    counters_ = OpCounters{};

    const PathHandle root = alloc_path();
    PathState& st = paths_[root];
    st.active = true;
    st.phase = 0;
    st.penalty = 0.0;
    st.mask.assign((dyn_rows + 63) / 64, 0);
    st.slot.assign(m_ + 1, 0);
    for (unsigned lambda = 0; lambda <= m_; ++lambda) {
        st.slot[lambda] = alloc_slot(lambda);
        ref_[lambda][st.slot[lambda]] = 1;
    }
    ++active_count_;
    double* s0 = llr_at(0, st.slot[0]);
    for (std::size_t i = 0; i < n(); ++i) s0[i] = llrs[i];
    return root;
}

PathHandle Workspace::alloc_path() {
    if (!free_paths_.empty()) {
        const PathHandle p = free_paths_.back();
        free_paths_.pop_back();
        return p;
    }
    if (paths_.size() >= capacity_) throw std::runtime_error("workspace full: all paths in use");
    paths_.emplace_back();
    paths_.back().slot.assign(m_ + 1, 0);
    return static_cast<PathHandle>(paths_.size() - 1);
}

std::uint32_t Workspace::alloc_slot(unsigned lambda) {
    if (!free_slots_[lambda].empty()) {
        const std::uint32_t s = free_slots_[lambda].back();
        free_slots_[lambda].pop_back();
        return s;
    }
    if (slots_used_[lambda] >= capacity_) throw std::runtime_error("pool exhausted at a layer");
    const std::uint32_t s = slots_used_[lambda]++;
    const std::size_t need = (std::size_t{s} + 1) * stride(lambda);
    if (llr_pool_[lambda].size() < need) {
        llr_pool_[lambda].resize(need);
        c_pool_[lambda].resize(need);
    }
    if (ref_[lambda].size() < std::size_t{s} + 1) ref_[lambda].resize(s + 1, 0);
    return s;
}

void Workspace::release_slot(unsigned lambda, std::uint32_t slot) { free_slots_[lambda].push_back(slot); }

PathHandle Workspace::clone_path(PathHandle l) {
    if (active_count_ >= capacity_) throw std::runtime_error("workspace full: cannot clone");
    const PathHandle child = alloc_path();
    PathState& src = paths_[l];
    PathState& dst = paths_[child];
    dst.active = true;
    dst.phase = src.phase;
    dst.penalty = src.penalty;
    dst.mask = src.mask;
    dst.slot = src.slot;
    for (unsigned lambda = 0; lambda <= m_; ++lambda) ++ref_[lambda][dst.slot[lambda]];
    ++active_count_;
    return child;
}

void Workspace::kill_path(PathHandle l) {
    PathState& st = paths_[l];
    if (!st.active) throw std::logic_error("kill of inactive path");
    for (unsigned lambda = 0; lambda <= m_; ++lambda) {
        std::uint32_t& rc = ref_[lambda][st.slot[lambda]];
        if (--rc == 0) release_slot(lambda, st.slot[lambda]);
    }
    st.active = false;
    free_paths_.push_back(l);
    --active_count_;
}

std::uint32_t Workspace::writable_slot(PathHandle l, unsigned lambda) {
    PathState& st = paths_[l];
    const std::uint32_t bound = st.slot[lambda];
    if (ref_[lambda][bound] == 1) return bound;
    --ref_[lambda][bound];
    const std::uint32_t fresh = alloc_slot(lambda);
    ref_[lambda][fresh] = 1;
    st.slot[lambda] = fresh;
    return fresh;
}

double Workspace::calc_S(PathHandle l, std::size_t phi) {
    if (phi >= n()) throw std::invalid_argument("phase out of range");
    // Largest d < m with 2^d dividing phi (d = m-1 for phi = 0).
    const unsigned d =
        phi == 0 ? m_ - 1 : std::min<unsigned>(static_cast<unsigned>(std::countr_zero(phi)), m_ - 1);
    unsigned lambda = m_ - d;
    std::size_t N = stride(lambda);
    const double* src = llr_at(lambda - 1, paths_[l].slot[lambda - 1]);
    if (phi != 0 && ((phi >> d) & 1u)) {
        // The live partial sums of this layer must be read from the slot
        // bound BEFORE the writable split replaces it.
        const std::uint32_t c_slot = paths_[l].slot[lambda];
        double* dst = llr_at(lambda, writable_slot(l, lambda));
        const std::uint8_t* ct = c_at(lambda, c_slot);
        for (std::size_t beta = 0; beta < N; ++beta) dst[beta] = min_sum_p(ct[beta], src[beta], src[beta + N]);
        counters_.additions += N;
        src = dst;
        ++lambda;
        N >>= 1;
    }
    for (; lambda <= m_; ++lambda, N >>= 1) {
        double* dst = llr_at(lambda, writable_slot(l, lambda));
        for (std::size_t beta = 0; beta < N; ++beta) dst[beta] = min_sum_q(src[beta + N], src[beta]);
        counters_.comparisons += N;
        src = dst;
    }
    return src[0];
}

void Workspace::write_bit(PathHandle l, std::size_t phi, std::uint8_t v) {
    const unsigned delta = static_cast<unsigned>(std::countr_zero(phi + 1));
    const unsigned lambda = m_ - delta;
    std::uint8_t* c = c_at(lambda, writable_slot(l, lambda));
    const std::size_t offset = (phi & 1u) ? (std::size_t{1} << delta) - 1 : 0;
    c[offset] = v & 1u;
}

void Workspace::update_C(PathHandle l, std::size_t phi) {
    if ((phi & 1u) == 0) throw std::invalid_argument("partial-sum propagation runs after odd phases only");
    const unsigned delta = static_cast<unsigned>(std::countr_zero(phi + 1));
    const unsigned landing = m_ - delta;
    std::uint8_t* base = c_at(landing, writable_slot(l, landing));
    std::size_t N = 1;
    std::size_t tilde = (std::size_t{1} << delta) - 2;
    std::size_t upper = tilde + 1;
    for (unsigned lambda = m_; lambda > landing; --lambda) {
        const std::uint8_t* prev = c_at(lambda, paths_[l].slot[lambda]);
        for (std::size_t beta = 0; beta < N; ++beta) base[tilde + beta] = prev[beta] ^ base[upper + beta];
        N <<= 1;
        upper = tilde;
        tilde -= N;  // wraps harmlessly to 0 on the last iteration via the loop bound
    }
}

std::vector<std::uint8_t> Workspace::codeword(PathHandle l) const {
    const std::uint8_t* c = c_at(0, paths_[l].slot[0]);
    return std::vector<std::uint8_t>(c, c + n());
}

std::size_t Workspace::partial_sum_cells_per_path() const {
    std::size_t total = 0;
    for (unsigned lambda = 0; lambda <= m_; ++lambda) total += stride(lambda);
    return total;
}

void Workspace::check_invariants() const {
    for (unsigned lambda = 0; lambda <= m_; ++lambda) {
        std::vector<std::uint32_t> counted(slots_used_[lambda], 0);
        for (std::size_t p = 0; p < paths_.size(); ++p) {
            if (!paths_[p].active) continue;
            const std::uint32_t s = paths_[p].slot[lambda];
            if (s >= slots_used_[lambda]) throw std::logic_error("path bound to unallocated slot");
            ++counted[s];
        }
        for (std::uint32_t s = 0; s < slots_used_[lambda]; ++s) {
            const bool freed =
                std::find(free_slots_[lambda].begin(), free_slots_[lambda].end(), s) != free_slots_[lambda].end();
            const std::uint32_t expect = freed ? 0 : ref_[lambda][s];
            if (counted[s] != expect) throw std::logic_error("slot reference count mismatch");
            if (!freed && ref_[lambda][s] == 0) throw std::logic_error("live slot with zero refcount");
        }
    }
}

std::vector<double> genie_sc_llrs(Workspace& ws, const std::vector<double>& llrs) {
    const PathHandle root = ws.init_root(llrs, 0);
    const std::size_t n = ws.n();
    std::vector<double> out(n);
    for (std::size_t phi = 0; phi < n; ++phi) {
        out[phi] = ws.calc_S(root, phi);
        ws.write_bit(root, phi, 0);
        if (phi & 1u) ws.update_C(root, phi);
    }
    return out;
}

}  // namespace polarseq
