#include "latmove/reachability.hpp"

#include <algorithm>

#include "latmove/errors.hpp"

namespace latmove {

namespace {

std::vector<double> to_real(std::span<const std::uint8_t> r) {
    std::vector<double> x(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) x[i] = static_cast<double>(r[i]);
    return x;
}

void validate_seed(std::span<const std::uint8_t> r0, std::size_t n, int max_hops) {
    if (r0.size() != n) throw ShapeMismatchError("seed vector length does not match host count");
    if (max_hops < 1) throw ValidationError("max_hops must be >= 1");
    for (auto v : r0) {
        if (v > 1) throw ValidationError("seed vector must be binary");
    }
}

// Shared driver: next = step(current); stops at the fixed point.
template <typename StepFn, typename WalkFn>
CascadeTrace run_cascade(std::span<const std::uint8_t> r0, int max_hops, StepFn step,
                         WalkFn walk_step) {
    CascadeTrace trace;
    trace.states.push_back({std::vector<std::uint8_t>(r0.begin(), r0.end()), 0, false});
    trace.walk_counts.push_back(to_real(r0));

    for (int t = 0; t < max_hops; ++t) {
        const auto& current = trace.states.back().r;
        std::vector<std::uint8_t> next = step(current);
        trace.walk_counts.push_back(walk_step(trace.walk_counts.back()));
        const bool fixed = (next == current);
        trace.states.push_back({std::move(next), t + 1, fixed});
        if (fixed) break;
    }
    return trace;
}

} // namespace

std::vector<double> threshold_clamp(std::span<const double> x) {
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] < 0.0) throw ValidationError("threshold input has a negative entry");
        y[i] = std::min(x[i], 1.0);
    }
    return y;
}

std::vector<std::uint8_t> indicator_exceeds(std::span<const double> x,
                                            const SecurityPosture& a) {
    if (x.size() != a.host_count()) {
        throw ShapeMismatchError("indicator input length does not match posture");
    }
    std::vector<std::uint8_t> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        y[i] = x[i] > a.at(static_cast<std::uint32_t>(i)) ? 1 : 0;
    }
    return y;
}

CascadeTrace user_host_cascade(const InducedHostMatrix& b,
                               std::span<const std::uint8_t> r0, int max_hops) {
    validate_seed(r0, b.m.rows(), max_hops);
    auto step = [&](const std::vector<std::uint8_t>& r) {
        auto x = b.m.matvec(to_real(r));
        for (std::size_t i = 0; i < x.size(); ++i) x[i] += r[i];
        const auto clamped = threshold_clamp(x);
        // Integer walk masses: T() of r + B r is already binary.
        std::vector<std::uint8_t> next(clamped.size());
        for (std::size_t i = 0; i < clamped.size(); ++i) next[i] = clamped[i] > 0.0 ? 1 : 0;
        return next;
    };
    auto walk = [&](const std::vector<double>& w) { return b.m.matvec(w); };
    return run_cascade(r0, max_hops, step, walk);
}

namespace {

CascadeTrace gated_cascade(const CsrMatrix& op, const SecurityPosture& a,
                           std::span<const std::uint8_t> r0, int max_hops) {
    validate_seed(r0, op.rows(), max_hops);
    if (a.host_count() != op.rows()) {
        throw ShapeMismatchError("posture length does not match host count");
    }
    auto step = [&](const std::vector<std::uint8_t>& r) {
        auto x = op.matvec(to_real(r));
        for (std::size_t i = 0; i < x.size(); ++i) x[i] += r[i];
        auto next = indicator_exceeds(threshold_clamp(x), a);
        // Compromise is absorbing; H_a alone could drop a seed whose
        // hardening level is 1.
        for (std::size_t i = 0; i < next.size(); ++i) next[i] = std::max(next[i], r[i]);
        return next;
    };
    auto walk = [&](const std::vector<double>& w) { return op.matvec(w); };
    return run_cascade(r0, max_hops, step, walk);
}

} // namespace

CascadeTrace host_app_cascade(const PropagationOperator& j, const SecurityPosture& a,
                              std::span<const std::uint8_t> r0, int max_hops) {
    return gated_cascade(j.m, a, r0, max_hops);
}

CascadeTrace tripartite_cascade(const InducedHostMatrix& b, const PropagationOperator& j,
                                const SecurityPosture& a,
                                std::span<const std::uint8_t> r0, int max_hops) {
    if (b.m.rows() != j.m.rows()) {
        throw ShapeMismatchError("operators disagree on host count");
    }
    // Materializing B + J keeps the per-hop work at one matvec.
    std::vector<Triplet> triplets;
    for (std::size_t r = 0; r < b.m.rows(); ++r) {
        const auto bc = b.m.row_cols(r);
        const auto bv = b.m.row_vals(r);
        for (std::size_t k = 0; k < bc.size(); ++k) {
            triplets.push_back({static_cast<std::uint32_t>(r), bc[k], bv[k]});
        }
        const auto jc = j.m.row_cols(r);
        const auto jv = j.m.row_vals(r);
        for (std::size_t k = 0; k < jc.size(); ++k) {
            triplets.push_back({static_cast<std::uint32_t>(r), jc[k], jv[k]});
        }
    }
    const auto combined =
        CsrMatrix::from_triplets(b.m.rows(), b.m.cols(), std::move(triplets));
    return gated_cascade(combined, a, r0, max_hops);
}

double reachability_fraction(const CompromiseState& state) {
    if (state.r.empty()) return 0.0;
    std::size_t count = 0;
    for (auto v : state.r) count += v;
    return static_cast<double>(count) / static_cast<double>(state.r.size());
}

} // namespace latmove
