#include "latmove/traces.hpp"

#include <algorithm>
#include <set>

#include "latmove/errors.hpp"
#include "latmove/rng.hpp"
#include "latmove/spectral.hpp"

namespace latmove {

namespace {

// Outgoing triples (src, k, dst) of one host, in (k, dst) order.
std::vector<FlowTriple> outgoing_of(const HostAppFlows& flows, std::uint32_t host) {
    std::vector<FlowTriple> out;
    for (const auto& t : flows.triples()) {
        if (t[0] == host) out.push_back(t);
    }
    std::sort(out.begin(), out.end(), [](const FlowTriple& a, const FlowTriple& b) {
        if (a[1] != b[1]) return a[1] < b[1];
        return a[2] < b[2];
    });
    return out;
}

} // namespace

AttackTrace gen_attack_traces(const HostAppFlows& flows, std::uint32_t origin, int branching,
                              int rounds, std::uint64_t seed) {
    if (origin >= flows.host_count()) throw ValidationError("trace origin out of range");
    if (branching < 1 || rounds < 1) {
        throw ValidationError("branching and rounds must be >= 1");
    }

    AttackTrace trace;
    trace.origin = origin;
    if (outgoing_of(flows, origin).empty()) {
        trace.warning_no_outgoing = true;
        return trace;
    }

    Rng rng = Rng::split(seed, 0x7);

    struct Node {
        std::uint32_t host;
        std::vector<FlowTriple> chain; // steps from the origin to this node
    };
    std::vector<Node> frontier{{origin, {}}};
    std::set<std::uint32_t> compromised{origin};

    for (int round = 0; round < rounds && !frontier.empty(); ++round) {
        std::vector<Node> next_frontier;
        for (const auto& node : frontier) {
            auto available = outgoing_of(flows, node.host);
            const auto take = std::min<std::size_t>(static_cast<std::size_t>(branching),
                                                    available.size());
            // Sample `take` distinct outgoing triples.
            std::vector<FlowTriple> chosen;
            if (take == available.size()) {
                chosen = std::move(available);
            } else {
                for (const auto idx : rng.sample_without_replacement(available.size(), take)) {
                    chosen.push_back(available[idx]);
                }
            }
            if (chosen.empty()) {
                // Dead end: the chain so far is a complete path.
                if (!node.chain.empty()) trace.paths.push_back(node.chain);
                continue;
            }
            for (const auto& step : chosen) {
                Node child{step[2], node.chain};
                child.chain.push_back(step);
                if (compromised.insert(step[2]).second) {
                    next_frontier.push_back(std::move(child));
                } else {
                    // Already-compromised target: the step happens but spawns
                    // no replication; record the chain as a leaf path.
                    trace.paths.push_back(child.chain);
                }
            }
        }
        frontier = std::move(next_frontier);
    }
    for (const auto& node : frontier) {
        if (!node.chain.empty()) trace.paths.push_back(node.chain);
    }
    return trace;
}

double trace_containment_reachability(const AttackTrace& traces, const HostAppFlows& flows,
                                      const std::vector<AppHostEdge>& hardened) {
    const std::size_t n = flows.host_count();
    if (n == 0) return 0.0;
    std::set<AppHostEdge> blocked(hardened.begin(), hardened.end());
    std::set<std::uint32_t> reached{traces.origin};
    for (const auto& path : traces.paths) {
        for (const auto& step : path) {
            if (flows.sources_into(step[1], step[2]).empty()) {
                throw ValidationError("trace references a flow absent from the flow set");
            }
            if (blocked.count({step[1], step[2]}) != 0) break;
            reached.insert(step[0]);
            reached.insert(step[2]);
        }
    }
    return static_cast<double>(reached.size()) / static_cast<double>(n);
}

std::vector<BenchmarkPoint> run_trace_benchmark(const AttackTrace& traces,
                                                const HostAppFlows& flows,
                                                const std::vector<EdgeHardeningPlan>& plans) {
    const EpsilonMap eps;
    CompromiseProbabilities ones(flows.app_count(), flows.host_count(),
                                 std::vector<double>(flows.app_count() * flows.host_count(), 1.0));
    const std::size_t eligible = eligible_edges(flows, ones, eps).size();

    std::vector<BenchmarkPoint> points;
    std::size_t previous = 0;
    for (const auto& plan : plans) {
        if (plan.hardened_edges.size() < previous) {
            throw ValidationError("benchmark plans must be ordered by increasing budget");
        }
        previous = plan.hardened_edges.size();
        BenchmarkPoint pt;
        pt.hardened_edges = plan.hardened_edges.size();
        pt.hardened_fraction = eligible == 0 ? 0.0
                                             : static_cast<double>(pt.hardened_edges) /
                                                   static_cast<double>(eligible);
        pt.reachability = trace_containment_reachability(traces, flows, plan.hardened_edges);
        points.push_back(pt);
    }
    return points;
}

EdgeHardeningPlan baseline_host_pair_harden(const HostAppFlows& flows,
                                            const CompromiseProbabilities& p,
                                            std::size_t budget_pairs,
                                            const EpsilonMap& eps) {
    EdgeHardeningPlan plan{{}, {}, {}, p, {}, {}};
    if (flows.triple_count() == 0) return plan;
    if (budget_pairs < 1) throw ValidationError("pair budget must be >= 1");

    // Collapsed host-host adjacency: edge (i, j) iff any A_k has the flow.
    const std::size_t n = flows.host_count();
    std::set<std::pair<std::uint32_t, std::uint32_t>> pairs;
    for (const auto& t : flows.triples()) pairs.insert({t[0], t[2]});
    std::vector<Triplet> triplets;
    for (const auto& [i, j] : pairs) triplets.push_back({i, j, 1.0});
    const auto collapsed = CsrMatrix::from_triplets(n, n, std::move(triplets));
    const auto x = leading_eigenpair_nonnegative(collapsed, kDefaultEigTolerance,
                                                 kPlannerEigMaxIterations);

    std::vector<std::pair<std::uint32_t, std::uint32_t>> ranked(pairs.begin(), pairs.end());
    std::sort(ranked.begin(), ranked.end(), [&](const auto& a, const auto& b) {
        const double sa = x.vector[a.first] * x.vector[a.second];
        const double sb = x.vector[b.first] * x.vector[b.second];
        if (sa != sb) return sa > sb;
        return a < b;
    });

    std::set<AppHostEdge> already;
    const std::size_t take = std::min(budget_pairs, ranked.size());
    for (std::size_t z = 0; z < take; ++z) {
        const auto dst = ranked[z].second;
        for (std::uint32_t k = 0; k < flows.app_count(); ++k) {
            const AppHostEdge edge{k, dst};
            const double psi = plan.resulting_p.at(k, dst);
            if (psi <= eps.at(edge)) continue; // nothing left to reduce
            if (!already.insert(edge).second) continue;
            plan.hardened_edges.push_back(edge);
            plan.old_values.push_back(psi);
            plan.epsilons.push_back(eps.at(edge));
            plan.selected_scores.push_back(x.vector[ranked[z].first] * x.vector[dst]);
            plan.resulting_p.set(k, dst, eps.at(edge));
        }
    }
    return plan;
}

} // namespace latmove
