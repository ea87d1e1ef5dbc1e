#include "latmove/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include <lapacke.h>

#include "latmove/errors.hpp"

namespace latmove {

namespace {

double norm2(const std::vector<double>& x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

std::vector<double> unit_basis(std::size_t n, std::size_t i) {
    std::vector<double> v(n, 0.0);
    v[i] = 1.0;
    return v;
}

std::vector<double> uniform_unit(std::size_t n) {
    return std::vector<double>(n, 1.0 / std::sqrt(static_cast<double>(n)));
}

inline constexpr std::size_t kDenseFallbackLimit = 2048;

// Dense escape hatch for spectra the power iteration cannot separate: tied
// or defective dominant eigenvalues (uniform residual probabilities create
// exactly tied cycles). Computes the full spectrum with LAPACK dgeev and
// returns the Perron pair.
LeadingEigenpair dense_leading_eigenpair(const CsrMatrix& m, double tolerance) {
    const auto n = static_cast<lapack_int>(m.rows());
    std::vector<double> a(m.rows() * m.rows(), 0.0);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        const auto cols = m.row_cols(i);
        const auto vals = m.row_vals(i);
        for (std::size_t k = 0; k < cols.size(); ++k) a[i * m.rows() + cols[k]] = vals[k];
    }
    std::vector<double> wr(m.rows()), wi(m.rows()), vr(m.rows() * m.rows());
    // Row-major LAPACKE insists on ldvl >= n even with jobvl = 'N'.
    const auto info = LAPACKE_dgeev(LAPACK_ROW_MAJOR, 'N', 'V', n, a.data(), n, wr.data(),
                                    wi.data(), nullptr, n, vr.data(), n);
    if (info != 0) throw ConvergenceError(0, 0.0);

    double rho = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        rho = std::max(rho, std::hypot(wr[i], wi[i]));
    }
    // Candidates at the spectral radius with a (numerically) real eigenvalue.
    // A defective Perron root can split into a conjugate pair with tiny
    // imaginary parts under rounding; the real-part column then carries the
    // eigenvector, and the residual check below vouches for it.
    const double real_slack = 1e-9 * std::max(rho, 1.0);
    std::vector<std::size_t> order(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return wr[x] > wr[y];
    });
    for (const auto idx : order) {
        if (std::abs(wi[idx]) > real_slack) continue;
        if (std::abs(wr[idx] - rho) > real_slack) break;
        std::vector<double> v(m.rows());
        for (std::size_t i = 0; i < m.rows(); ++i) v[i] = vr[i * m.rows() + idx];
        double sum = 0.0;
        for (double x : v) sum += x;
        if (sum < 0.0) {
            for (double& x : v) x = -x;
        }
        for (double& x : v) x = std::max(x, 0.0);
        const double nv = norm2(v);
        if (nv == 0.0) continue;
        for (double& x : v) x /= nv;
        const double lam = std::max(wr[idx], 0.0);
        auto mv = m.matvec(v);
        double residual = 0.0;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            const double d = mv[i] - lam * v[i];
            residual += d * d;
        }
        residual = std::sqrt(residual);
        if (residual <= tolerance * std::max(lam, 1.0)) {
            return {lam, std::move(v), residual, 0, false};
        }
    }
    throw ConvergenceError(0, 0.0);
}

// Shifted power iteration on M + I with the deterministic start 1/sqrt(n)*1.
// The start vector is nonnegative, hence never orthogonal to the Perron
// vector of an irreducible block.
LeadingEigenpair shifted_power_iteration(const CsrMatrix& m, double tolerance,
                                         int max_iterations) {
    const std::size_t n = m.rows();
    std::vector<double> v = uniform_unit(n);
    double residual = 0.0;
    double checkpoint = 0.0;
    const int window = 2000; // stagnation check interval
    for (int it = 1; it <= max_iterations; ++it) {
        std::vector<double> z = m.matvec(v);
        for (std::size_t i = 0; i < n; ++i) z[i] += v[i];
        double lam_shifted = 0.0;
        for (std::size_t i = 0; i < n; ++i) lam_shifted += v[i] * z[i];
        residual = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = z[i] - lam_shifted * v[i];
            residual += d * d;
        }
        residual = std::sqrt(residual);
        const double lam = std::max(lam_shifted - 1.0, 0.0);
        if (residual <= tolerance * std::max(lam, 1.0)) {
            for (double& x : v) x = std::max(x, 0.0);
            const double nv = norm2(v);
            for (double& x : v) x /= nv;
            return {lam, std::move(v), residual, it, false};
        }
        if (it % window == 0) {
            // Tied or defective dominant eigenvalues make the decay rate
            // sub-geometric; hand over to the dense route instead of burning
            // the remaining budget.
            const bool stalled = checkpoint > 0.0 && residual > 0.2 * checkpoint;
            if (stalled && n <= kDenseFallbackLimit) break;
            checkpoint = residual;
        }
        const double nz = norm2(z);
        for (std::size_t i = 0; i < n; ++i) v[i] = z[i] / nz;
    }
    if (n <= kDenseFallbackLimit) {
        try {
            return dense_leading_eigenpair(m, tolerance);
        } catch (const ConvergenceError&) {
        }
    }
    throw ConvergenceError(max_iterations, residual);
}

} // namespace

bool is_nilpotent_support(const CsrMatrix& m) {
    // Kahn's algorithm on the positive support; a leftover node means a cycle.
    // Edge i -> j exists iff m[j][i] > 0.
    const std::size_t n = m.rows();
    std::vector<std::uint32_t> indegree(n, 0);
    std::vector<std::vector<std::uint32_t>> out(n);
    for (std::size_t j = 0; j < n; ++j) {
        const auto cols = m.row_cols(j);
        const auto vals = m.row_vals(j);
        for (std::size_t k = 0; k < cols.size(); ++k) {
            if (vals[k] > 0.0) {
                out[cols[k]].push_back(static_cast<std::uint32_t>(j));
                indegree[j] += 1;
            }
        }
    }
    std::vector<std::uint32_t> stack;
    for (std::size_t i = 0; i < n; ++i) {
        if (indegree[i] == 0) stack.push_back(static_cast<std::uint32_t>(i));
    }
    std::size_t removed = 0;
    while (!stack.empty()) {
        const std::uint32_t i = stack.back();
        stack.pop_back();
        ++removed;
        for (std::uint32_t j : out[i]) {
            if (--indegree[j] == 0) stack.push_back(j);
        }
    }
    return removed == n;
}

LeadingEigenpair leading_eigenpair_symmetric(const CsrMatrix& m, double tolerance,
                                             int max_iterations) {
    if (tolerance <= 0.0) throw ValidationError("tolerance must be positive");
    if (m.rows() != m.cols()) throw ShapeMismatchError("eigensolver requires a square matrix");
    if (m.positive_count() == 0) {
        return {0.0, unit_basis(m.rows(), 0), 0.0, 0, true};
    }
    return shifted_power_iteration(m, tolerance, max_iterations);
}

LeadingEigenpair leading_eigenpair_nonnegative(const CsrMatrix& m, double tolerance,
                                               int max_iterations) {
    if (tolerance <= 0.0) throw ValidationError("tolerance must be positive");
    if (m.rows() != m.cols()) throw ShapeMismatchError("eigensolver requires a square matrix");
    if (is_nilpotent_support(m)) {
        // Spectral radius is exactly zero; the uniform vector is the scoring
        // fallback, not an eigenvector.
        LeadingEigenpair e{0.0, uniform_unit(m.rows()), 0.0, 0, true};
        e.residual = norm2(m.matvec(e.vector));
        return e;
    }
    return shifted_power_iteration(m, tolerance, max_iterations);
}

LeadingEigenpair leading_eigenpair_symmetric(const InducedHostMatrix& b, double tolerance,
                                             int max_iterations) {
    return leading_eigenpair_symmetric(b.m, tolerance, max_iterations);
}

LeadingEigenpair leading_eigenpair_nonnegative(const PropagationOperator& j, double tolerance,
                                               int max_iterations) {
    return leading_eigenpair_nonnegative(j.m, tolerance, max_iterations);
}

DenseMatrix kronecker_reference_operator(const CompromiseProbabilities& p,
                                         const HostAppFlows& flows) {
    const std::size_t n = flows.host_count();
    const std::size_t k = flows.app_count();
    if (p.app_count() != k || p.host_count() != n) {
        throw ShapeMismatchError("probability matrix shape does not match flows");
    }
    if (k * n * n > 1000000) {
        throw ValidationError("kronecker reference guard exceeded: K*N^2 > 1e6");
    }

    DenseMatrix pd(k, n);
    for (std::uint32_t a = 0; a < k; ++a) {
        for (std::uint32_t j = 0; j < n; ++j) pd.at(a, j) = p.at(a, j);
    }
    // Probability lift (P (x) 1_N)^T with the canonical per-host selector: the
    // stacked one-hop derivation applies e_j^T row-wise, which masks the lift
    // to its host-aligned entries before it meets A^T.
    const DenseMatrix lift = DenseMatrix::kron(pd, DenseMatrix::ones(n, 1)).transpose();
    const DenseMatrix mask = DenseMatrix::kron(DenseMatrix::ones(1, k), DenseMatrix::identity(n));
    const DenseMatrix selected = lift.hadamard(mask); // N x KN

    DenseMatrix a_concat(n, k * n); // [A_1 ... A_K]
    for (std::uint32_t app = 0; app < k; ++app) {
        const auto dense = flows.app_matrix(app).to_dense();
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                a_concat.at(i, app * n + j) = dense[i][j];
            }
        }
    }
    return selected.multiply(a_concat.transpose());
}

} // namespace latmove
