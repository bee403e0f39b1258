#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "dynsketch/errors.hpp"
#include "dynsketch/field.hpp"

namespace dynsketch {

/// Dense row-major matrix of canonical residues in [0, p).
class ZpMatrix {
public:
    ZpMatrix() = default;
    ZpMatrix(std::size_t rows, std::size_t cols, std::uint64_t modulus)
        : rows_(rows), cols_(cols), p_(modulus), data_(rows * cols, 0) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::uint64_t modulus() const { return p_; }

    std::uint64_t& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    std::uint64_t at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::uint64_t* row_ptr(std::size_t r) { return data_.data() + r * cols_; }
    const std::uint64_t* row_ptr(std::size_t r) const { return data_.data() + r * cols_; }

    const std::vector<std::uint64_t>& data() const { return data_; }

    bool operator==(const ZpMatrix&) const = default;

    void swap_rows(std::size_t a, std::size_t b) {
        if (a == b) return;
        std::uint64_t* ra = row_ptr(a);
        std::uint64_t* rb = row_ptr(b);
        for (std::size_t j = 0; j < cols_; ++j) std::swap(ra[j], rb[j]);
    }

    void swap_cols(std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t i = 0; i < rows_; ++i) std::swap(at(i, a), at(i, b));
    }

    void scale_row(std::size_t r, std::uint64_t factor) {
        std::uint64_t* row = row_ptr(r);
        for (std::size_t j = 0; j < cols_; ++j) row[j] = mulmod(row[j], factor, p_);
    }

    /// row[dst] -= factor * row[src]
    void row_submul(std::size_t dst, std::size_t src, std::uint64_t factor) {
        if (factor == 0) return;
        std::uint64_t* d = row_ptr(dst);
        const std::uint64_t* s = row_ptr(src);
        for (std::size_t j = 0; j < cols_; ++j) d[j] = submod(d[j], mulmod(factor, s[j], p_), p_);
    }

    /// col[dst] -= factor * col[src]
    void col_submul(std::size_t dst, std::size_t src, std::uint64_t factor) {
        if (factor == 0) return;
        for (std::size_t i = 0; i < rows_; ++i) {
            at(i, dst) = submod(at(i, dst), mulmod(factor, at(i, src), p_), p_);
        }
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::uint64_t p_ = 0;
    std::vector<std::uint64_t> data_;
};

inline ZpMatrix transposed(const ZpMatrix& m) {
    ZpMatrix t(m.cols(), m.rows(), m.modulus());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) t.at(j, i) = m.at(i, j);
    }
    return t;
}

/// Rank over Z_p by Gaussian elimination; pivots are the first nonzero entry
/// in column order (exact field, no conditioning concerns). Input untouched.
inline std::size_t rank(const ZpMatrix& m) {
    ZpMatrix a = m;
    const std::uint64_t p = a.modulus();
    std::size_t r = 0;
    for (std::size_t col = 0; col < a.cols() && r < a.rows(); ++col) {
        std::size_t pivot = r;
        while (pivot < a.rows() && a.at(pivot, col) == 0) ++pivot;
        if (pivot == a.rows()) continue;
        a.swap_rows(r, pivot);
        std::uint64_t inv = invmod(a.at(r, col), p);
        std::uint64_t* prow = a.row_ptr(r);
        for (std::size_t j = col; j < a.cols(); ++j) prow[j] = mulmod(prow[j], inv, p);
        for (std::size_t i = r + 1; i < a.rows(); ++i) {
            std::uint64_t f = a.at(i, col);
            if (f == 0) continue;
            std::uint64_t* irow = a.row_ptr(i);
            for (std::size_t j = col; j < a.cols(); ++j) {
                irow[j] = submod(irow[j], mulmod(f, prow[j], p), p);
            }
        }
        ++r;
    }
    return r;
}

struct BlockDiagonalization {
    ZpMatrix matrix;
    std::size_t rank = 0;
};

/// Turn the trailing block (rows/cols >= block_begin) into diag(1,..,1,0,..,0)
/// by elementary row/column operations applied to the full matrix. Rows and
/// columns before block_begin are only changed where the operations induce it
/// (the B and C side blocks); the leading principal block is untouched.
inline BlockDiagonalization diagonalize_block(ZpMatrix m, std::size_t block_begin) {
    const std::uint64_t p = m.modulus();
    const std::size_t rows = m.rows();
    const std::size_t cols = m.cols();
    std::size_t r = 0;
    while (block_begin + r < rows && block_begin + r < cols) {
        const std::size_t d = block_begin + r;
        // first nonzero entry of the remaining block, scanned row-major
        std::size_t pi = rows, pj = cols;
        for (std::size_t i = d; i < rows && pi == rows; ++i) {
            for (std::size_t j = d; j < cols; ++j) {
                if (m.at(i, j) != 0) {
                    pi = i;
                    pj = j;
                    break;
                }
            }
        }
        if (pi == rows) break;
        m.swap_rows(d, pi);
        m.swap_cols(d, pj);
        m.scale_row(d, invmod(m.at(d, d), p));
        for (std::size_t i = block_begin; i < rows; ++i) {
            if (i != d) m.row_submul(i, d, m.at(i, d));
        }
        for (std::size_t j = block_begin; j < cols; ++j) {
            if (j != d) m.col_submul(j, d, m.at(d, j));
        }
        ++r;
    }
    return BlockDiagonalization{std::move(m), r};
}

/// Starting from the diagonalized form, zero the cross blocks X (rows above
/// the identity) by row operations and Y (columns left of it) by column
/// operations. The leading block picks up the induced correction; everything
/// else is left as produced by diagonalize_block.
inline ZpMatrix eliminate_cross_blocks(ZpMatrix m, std::size_t block_begin, std::size_t block_rank) {
    for (std::size_t i = 0; i < block_begin; ++i) {
        for (std::size_t t = 0; t < block_rank; ++t) {
            m.row_submul(i, block_begin + t, m.at(i, block_begin + t));
        }
    }
    for (std::size_t j = 0; j < block_begin; ++j) {
        for (std::size_t t = 0; t < block_rank; ++t) {
            m.col_submul(j, block_begin + t, m.at(block_begin + t, j));
        }
    }
    return m;
}

/// Greedy left-to-right maximal independent column set, truncated or padded
/// with the lowest-index unused columns until `want` indices (or the column
/// count, whichever is smaller); missing columns beyond that are the caller's
/// zero padding.
inline std::vector<std::size_t> independent_columns(const ZpMatrix& m, std::size_t want) {
    ZpMatrix a = m;
    const std::uint64_t p = a.modulus();
    std::vector<std::size_t> picked;
    std::size_t r = 0;
    for (std::size_t col = 0; col < a.cols() && r < a.rows(); ++col) {
        std::size_t pivot = r;
        while (pivot < a.rows() && a.at(pivot, col) == 0) ++pivot;
        if (pivot == a.rows()) continue;
        picked.push_back(col);
        a.swap_rows(r, pivot);
        std::uint64_t inv = invmod(a.at(r, col), p);
        std::uint64_t* prow = a.row_ptr(r);
        for (std::size_t j = col; j < a.cols(); ++j) prow[j] = mulmod(prow[j], inv, p);
        for (std::size_t i = r + 1; i < a.rows(); ++i) {
            std::uint64_t f = a.at(i, col);
            if (f == 0) continue;
            std::uint64_t* irow = a.row_ptr(i);
            for (std::size_t j = col; j < a.cols(); ++j) {
                irow[j] = submod(irow[j], mulmod(f, prow[j], p), p);
            }
        }
        ++r;
    }
    if (picked.size() > want) {
        picked.resize(want);
        return picked;
    }
    std::vector<bool> used(m.cols(), false);
    for (std::size_t c : picked) used[c] = true;
    for (std::size_t c = 0; c < m.cols() && picked.size() < want; ++c) {
        if (!used[c]) picked.push_back(c);
    }
    return picked;
}

}  // namespace dynsketch
