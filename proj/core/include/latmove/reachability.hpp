#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "latmove/graph.hpp"

namespace latmove {

// Binary compromise vector after `hop` cascade steps. Compromise is
// absorbing: entries never revert to 0 along a trace.
struct CompromiseState {
    std::vector<std::uint8_t> r;
    int hop = 0;
    bool converged = false;
};

// Full cascade history. walk_counts[h] is the raw h-hop walk mass
// M^h r0 for the cascade operator M (B, J, or B + J); states[t] is the
// compromise vector after t hops. Both lists share indexing.
struct CascadeTrace {
    std::vector<CompromiseState> states;
    std::vector<std::vector<double>> walk_counts;

    const CompromiseState& final_state() const { return states.back(); }
    bool converged() const { return states.back().converged; }
};

// T: entrywise min(x, 1). Rejects negative entries.
std::vector<double> threshold_clamp(std::span<const double> x);

// H_a: entrywise strict comparison x > a.
std::vector<std::uint8_t> indicator_exceeds(std::span<const double> x,
                                            const SecurityPosture& a);

// r_{t+1} = T(r_t + B r_t) until fixed point or max_hops.
CascadeTrace user_host_cascade(const InducedHostMatrix& b,
                               std::span<const std::uint8_t> r0, int max_hops);

// r_{t+1} = max(r_t, H_a(T(r_t + J r_t))).
CascadeTrace host_app_cascade(const PropagationOperator& j, const SecurityPosture& a,
                              std::span<const std::uint8_t> r0, int max_hops);

// r_{t+1} = max(r_t, H_a(T(r_t + (B + J) r_t))).
CascadeTrace tripartite_cascade(const InducedHostMatrix& b, const PropagationOperator& j,
                                const SecurityPosture& a,
                                std::span<const std::uint8_t> r0, int max_hops);

// Fraction of hosts compromised in a state.
double reachability_fraction(const CompromiseState& state);

} // namespace latmove
