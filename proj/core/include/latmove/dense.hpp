#pragma once

#include <cstddef>
#include <vector>

namespace latmove {

// Small dense matrix used by the Kronecker reference construction and by
// oracle code. Not intended for large operands.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), a_(rows * cols, fill) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    double& at(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    double at(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    DenseMatrix transpose() const;
    DenseMatrix multiply(const DenseMatrix& other) const;
    DenseMatrix add(const DenseMatrix& other) const;
    DenseMatrix hadamard(const DenseMatrix& other) const;

    double max_abs_diff(const DenseMatrix& other) const;

    static DenseMatrix kron(const DenseMatrix& x1, const DenseMatrix& x2);
    static DenseMatrix ones(std::size_t rows, std::size_t cols);
    static DenseMatrix identity(std::size_t n);

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> a_;
};

} // namespace latmove
