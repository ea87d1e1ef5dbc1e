#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace latmove {

struct Triplet {
    std::uint32_t row;
    std::uint32_t col;
    double value;
};

// Row-compressed sparse matrix with sorted column indices per row.
// Iteration order is deterministic, which keeps every downstream
// tie-break reproducible. Immutable after construction.
class CsrMatrix {
public:
    CsrMatrix() = default;

    // Duplicates are summed. Zero-valued entries are kept structurally when
    // `keep_zeros` is set (the propagation operator stores a slot for every
    // flow so in-place hardening updates never change the pattern).
    static CsrMatrix from_triplets(std::size_t rows, std::size_t cols,
                                   std::vector<Triplet> triplets, bool keep_zeros = false);

    static CsrMatrix zero(std::size_t rows, std::size_t cols);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t nnz() const noexcept { return col_.size(); }

    std::span<const std::uint32_t> row_cols(std::size_t i) const {
        return {col_.data() + row_ptr_[i], col_.data() + row_ptr_[i + 1]};
    }
    std::span<const double> row_vals(std::size_t i) const {
        return {val_.data() + row_ptr_[i], val_.data() + row_ptr_[i + 1]};
    }
    std::span<double> row_vals_mut(std::size_t i) {
        return {val_.data() + row_ptr_[i], val_.data() + row_ptr_[i + 1]};
    }

    double at(std::size_t i, std::size_t j) const;

    // y = A x
    std::vector<double> matvec(std::span<const double> x) const;
    // y = A^T x
    std::vector<double> matvec_transpose(std::span<const double> x) const;

    std::vector<double> row_sums() const;
    std::vector<double> col_sums() const;

    // Count of entries with value > 0 (structural zeros excluded).
    std::size_t positive_count() const;

    std::vector<std::vector<double>> to_dense() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<std::size_t> row_ptr_{0};
    std::vector<std::uint32_t> col_;
    std::vector<double> val_;
};

} // namespace latmove
