#pragma once

#include <vector>

#include "latmove/dense.hpp"
#include "latmove/graph.hpp"
#include "latmove/sparse.hpp"

namespace latmove {

// Leading eigenpair of a nonnegative operator. On a non-degenerate return,
// ||M v - value * v||_2 <= residual <= tolerance * max(value, 1) and the
// vector is unit-norm with nonnegative entries.
//
// `degenerate` marks spectral radius zero (nilpotent or all-zero operator):
// the eigenvalue is exact but the reported vector is a scoring fallback,
// not an eigenvector with a residual guarantee.
struct LeadingEigenpair {
    double value = 0.0;
    std::vector<double> vector;
    double residual = 0.0;
    int iterations = 0;
    bool degenerate = false;
};

inline constexpr double kDefaultEigTolerance = 1e-10;
inline constexpr int kDefaultEigMaxIterations = 10000;

// Greedy planners and experiment drivers solve long sequences of eigenpairs
// on progressively modified operators whose dominant eigenvalues can
// cluster; they request a larger iteration budget than the bare solver
// default so slow geometric convergence still finishes.
inline constexpr int kPlannerEigMaxIterations = 300000;

// Largest eigenpair of the symmetric PSD operator B. The all-zero matrix
// yields value 0 with the first canonical basis vector.
LeadingEigenpair leading_eigenpair_symmetric(const InducedHostMatrix& b,
                                             double tolerance = kDefaultEigTolerance,
                                             int max_iterations = kDefaultEigMaxIterations);

// Largest eigenpair of the nonnegative (generally nonsymmetric) operator J.
// Power iteration runs on J + I so magnitude dominance holds for periodic
// supports. A nilpotent J (acyclic positive support) short-circuits to the
// degenerate result with the uniform fallback vector.
LeadingEigenpair leading_eigenpair_nonnegative(const PropagationOperator& j,
                                               double tolerance = kDefaultEigTolerance,
                                               int max_iterations = kDefaultEigMaxIterations);

// Same solvers on a raw matrix (used on modified operators and by tests).
LeadingEigenpair leading_eigenpair_symmetric(const CsrMatrix& m,
                                             double tolerance = kDefaultEigTolerance,
                                             int max_iterations = kDefaultEigMaxIterations);
LeadingEigenpair leading_eigenpair_nonnegative(const CsrMatrix& m,
                                               double tolerance = kDefaultEigTolerance,
                                               int max_iterations = kDefaultEigMaxIterations);

// Reference construction that materializes the dense probability lift
// (P (x) 1_N)^T, masks it to its host-aligned rows (the canonical selector of
// the stacked one-hop derivation), and multiplies by A^T with A = [A_1 ... A_K].
// Exists as an oracle for the sparse closed form; guarded to K * N^2 <= 10^6
// dense entries.
DenseMatrix kronecker_reference_operator(const CompromiseProbabilities& p,
                                         const HostAppFlows& flows);

// True if the positive-entry support digraph of m (edge i -> j iff
// m[j][i] > 0) has no directed cycle, i.e. m is nilpotent.
bool is_nilpotent_support(const CsrMatrix& m);

} // namespace latmove
