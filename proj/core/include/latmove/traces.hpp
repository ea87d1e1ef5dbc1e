#pragma once

#include <cstdint>
#include <vector>

#include "latmove/graph.hpp"
#include "latmove/hardening.hpp"

namespace latmove {

// One replication tree of lateral movement, flattened to root-to-leaf step
// chains. Every path starts at `origin` and consecutive steps share hosts.
struct AttackTrace {
    std::uint32_t origin = 0;
    std::vector<std::vector<FlowTriple>> paths;
    bool warning_no_outgoing = false;
};

// Breadth-wise replication along existing flow triples: each newly
// compromised host spawns up to `branching` child steps per round, sampled
// without replacement from its outgoing flows.
AttackTrace gen_attack_traces(const HostAppFlows& flows, std::uint32_t origin, int branching,
                              int rounds, std::uint64_t seed);

struct BenchmarkPoint {
    double hardened_fraction = 0.0;
    std::size_t hardened_edges = 0;
    double reachability = 0.0;
};

// Containment reachability for one hardened edge set: a path is truncated
// at its first step whose (app, dst) entry is hardened; reachability is the
// fraction of hosts in the union of the surviving steps plus the origin.
double trace_containment_reachability(const AttackTrace& traces, const HostAppFlows& flows,
                                      const std::vector<AppHostEdge>& hardened);

// Evaluates a sequence of plan prefixes (ordered by increasing budget)
// against the trace set.
std::vector<BenchmarkPoint> run_trace_benchmark(const AttackTrace& traces,
                                                const HostAppFlows& flows,
                                                const std::vector<EdgeHardeningPlan>& plans);

// Homogeneous host-host baseline: collapses the flows to one adjacency,
// scores directed host pairs by the product of leading-eigenvector entries,
// and expands each selected pair into the K corresponding (app, dst) edges.
EdgeHardeningPlan baseline_host_pair_harden(const HostAppFlows& flows,
                                            const CompromiseProbabilities& p,
                                            std::size_t budget_pairs,
                                            const EpsilonMap& eps = EpsilonMap());

} // namespace latmove
