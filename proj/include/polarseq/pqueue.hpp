#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

namespace polarseq {

// Bounded max-priority queue over decoder paths.
//
// Entries are ordered by a strict total order: higher score first, then
// deeper phase (longer path) first, then lower insertion sequence number
// (FIFO). The strictness makes every pop sequence deterministic.
//
// Every comparator call is counted into an external counter when one is
// provided; these are the "queue comparison" operations of the decoder's
// complexity report.
class PathQueue {
   public:
    struct Entry {
        double score = 0.0;
        std::uint32_t phase = 0;
        std::uint64_t seq = 0;
        std::uint32_t path = 0;
    };

    explicit PathQueue(std::size_t capacity, std::uint64_t* comparison_counter = nullptr)
        : capacity_(capacity), counter_(comparison_counter) {
        if (capacity_ == 0) throw std::invalid_argument("queue capacity must be positive");
        heap_.reserve(capacity_);
    }

    std::size_t size() const { return heap_.size(); }
    bool empty() const { return heap_.empty(); }
    std::size_t capacity() const { return capacity_; }

    // Insertion sequence numbers may also be claimed by the caller for an
    // entry it keeps in hand, so that FIFO ordering spans held entries too.
    std::uint64_t next_seq() { return seq_counter_++; }

    // True iff a must pop before b. Counted.
    bool higher(const Entry& a, const Entry& b) {
        if (counter_) ++*counter_;
        if (a.score != b.score) return a.score > b.score;
        if (a.phase != b.phase) return a.phase > b.phase;
        return a.seq < b.seq;
    }

    void push(std::uint32_t path, double score, std::uint32_t phase) {
        push_entry(Entry{score, phase, next_seq(), path});
    }

    // Push an entry whose sequence number was claimed earlier via next_seq().
    void push_entry(const Entry& e) {
        if (heap_.size() >= capacity_) throw std::logic_error("push on full queue (caller must evict first)");
        ensure_pos(e.path);
        if (pos_[e.path] != kNone) throw std::logic_error("path already queued");
        heap_.push_back(e);
        pos_[e.path] = heap_.size() - 1;
        sift_up(heap_.size() - 1);
    }

    const Entry& peek_max() const {
        if (heap_.empty()) throw std::logic_error("peek on empty queue");
        return heap_[0];
    }

    Entry pop_max() {
        if (heap_.empty()) throw std::logic_error("pop on empty queue");
        return remove_at(0);
    }

    bool contains(std::uint32_t path) const {
        return path < pos_.size() && pos_[path] != kNone;
    }

    // Remove the entry of a specific path (arbitrary removal).
    Entry remove(std::uint32_t path) {
        if (!contains(path)) throw std::logic_error("remove of path not in queue");
        return remove_at(pos_[path]);
    }

    // Remove the entry that would pop last. In a max-heap the minimum is a
    // leaf, so only the bottom half of the array is scanned.
    Entry evict_min() {
        if (heap_.empty()) throw std::logic_error("evict on empty queue");
        std::size_t best = heap_.size() / 2;  // first leaf index
        for (std::size_t i = best + 1; i < heap_.size(); ++i)
            if (higher(heap_[best], heap_[i])) best = i;
        return remove_at(best);
    }

    // Remove every entry whose phase is <= cutoff; returns them (order
    // unspecified) so the caller can release the underlying paths.
    std::vector<Entry> remove_phase_at_most(std::uint32_t cutoff) {
        std::vector<Entry> out;
        std::size_t i = 0;
        while (i < heap_.size()) {
            if (heap_[i].phase <= cutoff)
                out.push_back(remove_at(i));  // replacement lands at i; re-examine
            else
                ++i;
        }
        return out;
    }

    template <class F>
    void for_each(F&& f) const {
        for (const Entry& e : heap_) f(e);
    }

   private:
    static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

    void ensure_pos(std::uint32_t path) {
        if (path >= pos_.size()) pos_.resize(path + 1, kNone);
    }

    void place(std::size_t i, const Entry& e) {
        heap_[i] = e;
        pos_[e.path] = i;
    }

    Entry remove_at(std::size_t i) {
        Entry out = heap_[i];
        pos_[out.path] = kNone;
        const Entry last = heap_.back();
        heap_.pop_back();
        if (i < heap_.size()) {
            place(i, last);
            if (!sift_up(i)) sift_down(i);
        }
        return out;
    }

    bool sift_up(std::size_t i) {
        bool moved = false;
        while (i > 0) {
            const std::size_t parent = (i - 1) / 2;
            if (!higher(heap_[i], heap_[parent])) break;
            std::swap(heap_[i], heap_[parent]);
            pos_[heap_[i].path] = i;
            pos_[heap_[parent].path] = parent;
            i = parent;
            moved = true;
        }
        return moved;
    }

    void sift_down(std::size_t i) {
        while (true) {
            const std::size_t left = 2 * i + 1, right = left + 1;
            std::size_t top = i;
            if (left < heap_.size() && higher(heap_[left], heap_[top])) top = left;
            if (right < heap_.size() && higher(heap_[right], heap_[top])) top = right;
            if (top == i) break;
            std::swap(heap_[i], heap_[top]);
            pos_[heap_[i].path] = i;
            pos_[heap_[top].path] = top;
            i = top;
        }
    }

    std::size_t capacity_;
    std::uint64_t* counter_;
    std::uint64_t seq_counter_ = 0;
    std::vector<Entry> heap_;
    std::vector<std::size_t> pos_;
};

}  // namespace polarseq
