#include "latmove/sparse.hpp"

#include <algorithm>
#include <stdexcept>

namespace latmove {

CsrMatrix CsrMatrix::from_triplets(std::size_t rows, std::size_t cols,
                                   std::vector<Triplet> triplets, bool keep_zeros) {
    for (const auto& t : triplets) {
        if (t.row >= rows || t.col >= cols) {
            throw std::out_of_range("triplet index out of range");
        }
    }
    std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
        if (a.row != b.row) return a.row < b.row;
        return a.col < b.col;
    });

    CsrMatrix m;
    m.rows_ = rows;
    m.cols_ = cols;
    m.row_ptr_.assign(rows + 1, 0);
    m.col_.reserve(triplets.size());
    m.val_.reserve(triplets.size());

    std::size_t i = 0;
    while (i < triplets.size()) {
        const std::uint32_t r = triplets[i].row;
        const std::uint32_t c = triplets[i].col;
        double sum = 0.0;
        while (i < triplets.size() && triplets[i].row == r && triplets[i].col == c) {
            sum += triplets[i].value;
            ++i;
        }
        if (sum != 0.0 || keep_zeros) {
            m.col_.push_back(c);
            m.val_.push_back(sum);
            m.row_ptr_[r + 1] += 1;
        }
    }
    for (std::size_t r = 0; r < rows; ++r) {
        m.row_ptr_[r + 1] += m.row_ptr_[r];
    }
    return m;
}

CsrMatrix CsrMatrix::zero(std::size_t rows, std::size_t cols) {
    CsrMatrix m;
    m.rows_ = rows;
    m.cols_ = cols;
    m.row_ptr_.assign(rows + 1, 0);
    return m;
}

double CsrMatrix::at(std::size_t i, std::size_t j) const {
    const auto cols = row_cols(i);
    const auto it = std::lower_bound(cols.begin(), cols.end(), static_cast<std::uint32_t>(j));
    if (it == cols.end() || *it != j) return 0.0;
    return row_vals(i)[static_cast<std::size_t>(it - cols.begin())];
}

std::vector<double> CsrMatrix::matvec(std::span<const double> x) const {
    if (x.size() != cols_) throw std::invalid_argument("matvec: size mismatch");
    std::vector<double> y(rows_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i) {
        double acc = 0.0;
        const auto cols = row_cols(i);
        const auto vals = row_vals(i);
        for (std::size_t k = 0; k < cols.size(); ++k) {
            acc += vals[k] * x[cols[k]];
        }
        y[i] = acc;
    }
    return y;
}

std::vector<double> CsrMatrix::matvec_transpose(std::span<const double> x) const {
    if (x.size() != rows_) throw std::invalid_argument("matvec_transpose: size mismatch");
    std::vector<double> y(cols_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i) {
        const auto cols = row_cols(i);
        const auto vals = row_vals(i);
        for (std::size_t k = 0; k < cols.size(); ++k) {
            y[cols[k]] += vals[k] * x[i];
        }
    }
    return y;
}

std::vector<double> CsrMatrix::row_sums() const {
    std::vector<double> s(rows_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (double v : row_vals(i)) s[i] += v;
    }
    return s;
}

std::vector<double> CsrMatrix::col_sums() const {
    std::vector<double> s(cols_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i) {
        const auto cols = row_cols(i);
        const auto vals = row_vals(i);
        for (std::size_t k = 0; k < cols.size(); ++k) s[cols[k]] += vals[k];
    }
    return s;
}

std::size_t CsrMatrix::positive_count() const {
    std::size_t n = 0;
    for (double v : val_) {
        if (v > 0.0) ++n;
    }
    return n;
}

std::vector<std::vector<double>> CsrMatrix::to_dense() const {
    std::vector<std::vector<double>> d(rows_, std::vector<double>(cols_, 0.0));
    for (std::size_t i = 0; i < rows_; ++i) {
        const auto cols = row_cols(i);
        const auto vals = row_vals(i);
        for (std::size_t k = 0; k < cols.size(); ++k) d[i][cols[k]] = vals[k];
    }
    return d;
}

} // namespace latmove
