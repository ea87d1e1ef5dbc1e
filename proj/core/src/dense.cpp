#include "latmove/dense.hpp"

#include <cmath>
#include <stdexcept>

namespace latmove {

DenseMatrix DenseMatrix::transpose() const {
    DenseMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
    }
    return t;
}

DenseMatrix DenseMatrix::multiply(const DenseMatrix& other) const {
    if (cols_ != other.rows_) throw std::invalid_argument("multiply: shape mismatch");
    DenseMatrix r(rows_, other.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t k = 0; k < cols_; ++k) {
            const double v = at(i, k);
            if (v == 0.0) continue;
            for (std::size_t j = 0; j < other.cols_; ++j) {
                r.at(i, j) += v * other.at(k, j);
            }
        }
    }
    return r;
}

DenseMatrix DenseMatrix::add(const DenseMatrix& other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_) {
        throw std::invalid_argument("add: shape mismatch");
    }
    DenseMatrix r(rows_, cols_);
    for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] + other.a_[i];
    return r;
}

double DenseMatrix::max_abs_diff(const DenseMatrix& other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_) {
        throw std::invalid_argument("max_abs_diff: shape mismatch");
    }
    double m = 0.0;
    for (std::size_t i = 0; i < a_.size(); ++i) {
        m = std::max(m, std::abs(a_[i] - other.a_[i]));
    }
    return m;
}

DenseMatrix DenseMatrix::kron(const DenseMatrix& x1, const DenseMatrix& x2) {
    DenseMatrix r(x1.rows() * x2.rows(), x1.cols() * x2.cols());
    for (std::size_t i1 = 0; i1 < x1.rows(); ++i1) {
        for (std::size_t j1 = 0; j1 < x1.cols(); ++j1) {
            const double v = x1.at(i1, j1);
            if (v == 0.0) continue;
            for (std::size_t i2 = 0; i2 < x2.rows(); ++i2) {
                for (std::size_t j2 = 0; j2 < x2.cols(); ++j2) {
                    r.at(i1 * x2.rows() + i2, j1 * x2.cols() + j2) = v * x2.at(i2, j2);
                }
            }
        }
    }
    return r;
}

DenseMatrix DenseMatrix::ones(std::size_t rows, std::size_t cols) {
    return DenseMatrix(rows, cols, 1.0);
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
}

DenseMatrix DenseMatrix::hadamard(const DenseMatrix& other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_) {
        throw std::invalid_argument("hadamard: shape mismatch");
    }
    DenseMatrix r(rows_, cols_);
    for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] * other.a_[i];
    return r;
}

} // namespace latmove
