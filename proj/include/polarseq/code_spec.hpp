#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace polarseq {

// One linear freezing constraint u[pivot] = XOR of u[c] over c in cols.
// cols are strictly ascending and all strictly less than pivot; an empty
// cols list denotes a statically frozen position (u[pivot] = 0).
struct ConstraintRow {
    std::uint32_t pivot = 0;
    std::vector<std::uint32_t> cols;

    bool operator==(const ConstraintRow&) const = default;
};

// A length-2^m linear code defined by freezing constraints over the input
// vector u of the polar transform: codewords are c = u * F^{(m)} where every
// constraint row holds. Positions that are no row's pivot carry information
// bits. k = n - (number of rows).
class CodeSpec {
   public:
    CodeSpec(unsigned m, std::vector<ConstraintRow> rows);

    unsigned m() const { return m_; }
    std::size_t n() const { return std::size_t{1} << m_; }
    std::size_t k() const { return n() - rows_.size(); }

    const std::vector<ConstraintRow>& rows() const { return rows_; }

    // Index of the constraint row whose pivot is `phase`, or -1 if the
    // phase carries an information bit.
    int row_of(std::size_t phase) const { return row_of_[phase]; }
    bool is_frozen(std::size_t phase) const { return row_of_[phase] >= 0; }

    // Indices of constraint rows whose cols list contains `phase`.
    // Deciding u[phase] = 1 toggles the running parity of exactly these rows.
    const std::vector<std::uint32_t>& rows_listing(std::size_t phase) const {
        return rows_listing_[phase];
    }

    // Information-bit positions, ascending.
    const std::vector<std::uint32_t>& info_positions() const { return info_positions_; }

    // Number of rows with a nonempty cols list (dynamically frozen positions).
    std::size_t dynamic_row_count() const { return dynamic_rows_; }

    // Fill frozen positions of u from `info` (one bit per info position,
    // in ascending position order) by evaluating each constraint in turn.
    std::vector<std::uint8_t> expand_info(const std::vector<std::uint8_t>& info) const;

    // c = expand_info(info) * F^{(m)}.
    std::vector<std::uint8_t> encode(const std::vector<std::uint8_t>& info) const;

    // Recover the information bits of a codeword (the transform is an
    // involution, so u = c * F^{(m)}).
    std::vector<std::uint8_t> extract_info(const std::vector<std::uint8_t>& codeword) const;

    // True iff the word satisfies every freezing constraint.
    bool is_codeword(const std::vector<std::uint8_t>& word) const;

    // Text form:
    //   polar-subcode v1 m=<m> k=<k>
    //   <pivot>: <c1> <c2> ...
    // one line per constraint row, pivots ascending.
    std::string to_text() const;
    static CodeSpec from_text(const std::string& text);

    void save(const std::string& path) const;
    static CodeSpec load(const std::string& path);

    bool operator==(const CodeSpec& other) const {
        return m_ == other.m_ && rows_ == other.rows_;
    }

   private:
    unsigned m_;
    std::vector<ConstraintRow> rows_;
    std::vector<int> row_of_;
    std::vector<std::vector<std::uint32_t>> rows_listing_;
    std::vector<std::uint32_t> info_positions_;
    std::size_t dynamic_rows_ = 0;
};

// In-place polar transform: u <- u * F^{(m)} with F = [[1,0],[1,1]] in
// natural bit order. Requires u.size() to be a power of two. Involution.
void polar_transform_inplace(std::vector<std::uint8_t>& u);

}  // namespace polarseq
