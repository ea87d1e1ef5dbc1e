#include "latmove/hardening.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "latmove/errors.hpp"

namespace latmove {

namespace {

double phi_closed_form(const std::vector<double>& y, const HostAppFlows& flows,
                       double p_value, AppHostEdge edge, double eps) {
    const auto& [k, j] = edge;
    double inflow = 0.0;
    for (std::uint32_t i : flows.sources_into(k, j)) inflow += y[i];
    return (p_value - eps) * y[j] * inflow;
}

void validate_eps(double p_value, double eps) {
    if (eps < 0.0) throw ValidationError("residual probability must be nonnegative");
    if (eps >= p_value) {
        throw ValidationError("residual probability must be below the current P value");
    }
}

EdgeHardeningPlan make_edge_plan(const CompromiseProbabilities& p) {
    return EdgeHardeningPlan{{}, {}, {}, p, {}, {}};
}

} // namespace

double edge_hardening_score(const LeadingEigenpair& y, const HostAppFlows& flows,
                            const CompromiseProbabilities& p, AppHostEdge edge, double eps) {
    const auto& [k, j] = edge;
    if (k >= flows.app_count() || j >= flows.host_count()) {
        throw ValidationError("hardening edge index out of range");
    }
    validate_eps(p.at(k, j), eps);
    return phi_closed_form(y.vector, flows, p.at(k, j), edge, eps);
}

std::vector<AppHostEdge> eligible_edges(const HostAppFlows& flows,
                                        const CompromiseProbabilities& p,
                                        const EpsilonMap& eps) {
    std::vector<AppHostEdge> edges;
    for (std::uint32_t k = 0; k < flows.app_count(); ++k) {
        for (std::uint32_t j = 0; j < flows.host_count(); ++j) {
            if (flows.sources_into(k, j).empty()) continue;
            if (p.at(k, j) > eps.at({k, j})) edges.push_back({k, j});
        }
    }
    return edges;
}

EdgeHardeningPlan greedy_edge_harden(const HostAppFlows& flows,
                                     const CompromiseProbabilities& p, std::size_t eta,
                                     const EpsilonMap& eps, bool recalculate,
                                     double tolerance, int max_iterations) {
    const auto candidates = eligible_edges(flows, p, eps);
    if (eta < 1) throw ValidationError("hardening budget eta must be >= 1");
    if (eta > candidates.size()) {
        throw ValidationError("hardening budget eta exceeds eligible edge count " +
                              std::to_string(candidates.size()));
    }

    EdgeHardeningPlan plan = make_edge_plan(p);

    if (!recalculate) {
        const auto j_op = propagation_operator(flows, p);
        const auto y = leading_eigenpair_nonnegative(j_op, tolerance, max_iterations);
        std::vector<double> scores(candidates.size());
        for (std::size_t i = 0; i < candidates.size(); ++i) {
            scores[i] = phi_closed_form(y.vector, flows, p.at(candidates[i].first,
                                                              candidates[i].second),
                                        candidates[i], eps.at(candidates[i]));
        }
        std::vector<std::size_t> order(candidates.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (scores[a] != scores[b]) return scores[a] > scores[b];
            return candidates[a] < candidates[b];
        });
        for (std::size_t z = 0; z < eta; ++z) {
            const auto edge = candidates[order[z]];
            plan.hardened_edges.push_back(edge);
            plan.selected_scores.push_back(scores[order[z]]);
            plan.old_values.push_back(plan.resulting_p.at(edge.first, edge.second));
            plan.epsilons.push_back(eps.at(edge));
            plan.resulting_p.set(edge.first, edge.second, eps.at(edge));
        }
        return plan;
    }

    auto j_op = propagation_operator(flows, p);
    std::vector<bool> taken(candidates.size(), false);
    for (std::size_t z = 0; z < eta; ++z) {
        const auto y = leading_eigenpair_nonnegative(j_op, tolerance, max_iterations);
        plan.lambda_trace.push_back(y.value);
        double best_score = -std::numeric_limits<double>::infinity();
        std::size_t best = candidates.size();
        for (std::size_t i = 0; i < candidates.size(); ++i) {
            if (taken[i]) continue;
            const double score =
                phi_closed_form(y.vector, flows,
                                plan.resulting_p.at(candidates[i].first, candidates[i].second),
                                candidates[i], eps.at(candidates[i]));
            if (score > best_score) {
                best_score = score;
                best = i;
            }
        }
        taken[best] = true;
        const auto edge = candidates[best];
        const double psi = plan.resulting_p.at(edge.first, edge.second);
        plan.hardened_edges.push_back(edge);
        plan.selected_scores.push_back(best_score);
        plan.old_values.push_back(psi);
        plan.epsilons.push_back(eps.at(edge));
        plan.resulting_p.set(edge.first, edge.second, eps.at(edge));
        j_op = efficient_J_update(j_op, flows, edge, psi, eps.at(edge));
    }
    plan.lambda_trace.push_back(
        leading_eigenpair_nonnegative(j_op, tolerance, max_iterations).value);
    return plan;
}

EdgeHardeningPlan max_p_heuristic_harden(const HostAppFlows& flows,
                                         const CompromiseProbabilities& p, std::size_t eta,
                                         const EpsilonMap& eps) {
    const auto candidates = eligible_edges(flows, p, eps);
    if (eta < 1 || eta > candidates.size()) {
        throw ValidationError("hardening budget out of range");
    }
    std::vector<std::size_t> order(candidates.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const double pa = p.at(candidates[a].first, candidates[a].second);
        const double pb = p.at(candidates[b].first, candidates[b].second);
        if (pa != pb) return pa > pb;
        return candidates[a] < candidates[b];
    });

    EdgeHardeningPlan plan = make_edge_plan(p);
    for (std::size_t z = 0; z < eta; ++z) {
        const auto edge = candidates[order[z]];
        plan.hardened_edges.push_back(edge);
        plan.selected_scores.push_back(p.at(edge.first, edge.second));
        plan.old_values.push_back(p.at(edge.first, edge.second));
        plan.epsilons.push_back(eps.at(edge));
        plan.resulting_p.set(edge.first, edge.second, eps.at(edge));
    }
    return plan;
}

std::vector<double> node_scores(const HostAppFlows& flows, const CompromiseProbabilities& p,
                                const PropagationOperator& j, const LeadingEigenpair& y,
                                NodeScoreKind kind, const SecurityPosture& a,
                                const EpsilonMap& eps) {
    const std::size_t n = flows.host_count();
    std::vector<double> scores(n, 0.0);
    switch (kind) {
        case NodeScoreKind::Rho: {
            for (std::uint32_t k = 0; k < flows.app_count(); ++k) {
                for (std::uint32_t host = 0; host < n; ++host) {
                    if (flows.sources_into(k, host).empty()) continue;
                    const double e = eps.at({k, host});
                    if (p.at(k, host) <= e) continue; // ineligible edges score 0
                    scores[host] +=
                        phi_closed_form(y.vector, flows, p.at(k, host), {k, host}, e);
                }
            }
            break;
        }
        case NodeScoreKind::RhoPosture: {
            for (std::uint32_t host = 0; host < n; ++host) {
                const double level = a.at(host);
                scores[host] = level == 0.0 ? std::numeric_limits<double>::infinity()
                                            : 1.0 / level;
            }
            break;
        }
        case NodeScoreKind::RhoRowSum: {
            scores = j.m.row_sums();
            break;
        }
    }
    return scores;
}

NodeHardeningPlan greedy_node_harden(const std::vector<double>& scores, std::size_t zeta,
                                     const std::map<std::uint32_t, double>& alpha,
                                     const SecurityPosture& a, double default_alpha) {
    const std::size_t n = a.host_count();
    if (scores.size() != n) throw ShapeMismatchError("score vector length mismatch");
    if (zeta < 1 || zeta > n) throw ValidationError("node hardening budget out of range");

    std::vector<std::uint32_t> order(n);
    for (std::uint32_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::uint32_t x, std::uint32_t y2) {
        if (scores[x] != scores[y2]) return scores[x] > scores[y2];
        return x < y2;
    });

    auto levels = a.levels();
    NodeHardeningPlan plan{{}, {}, {}, a, scores};
    for (std::size_t z = 0; z < zeta; ++z) {
        const std::uint32_t host = order[z];
        const auto it = alpha.find(host);
        const double target = it == alpha.end() ? default_alpha : it->second;
        if (target < a.at(host) || target > 1.0) {
            throw ValidationError("target hardening level must lie in [a_j, 1]");
        }
        plan.hardened_hosts.push_back(host);
        plan.alphas.push_back(target);
        plan.old_levels.push_back(a.at(host));
        levels[host] = target;
    }
    plan.resulting_posture = SecurityPosture(std::move(levels));
    return plan;
}

NodeHardeningPlan min_a_heuristic_harden(const SecurityPosture& a, std::size_t zeta,
                                         const std::map<std::uint32_t, double>& alpha,
                                         double default_alpha) {
    // Ascending level == descending negated level; reuse the greedy selector.
    std::vector<double> scores(a.host_count());
    for (std::uint32_t j = 0; j < a.host_count(); ++j) scores[j] = -a.at(j);
    auto plan = greedy_node_harden(scores, zeta, alpha, a, default_alpha);
    plan.scores = std::move(scores);
    return plan;
}

PropagationOperator efficient_J_update(const PropagationOperator& j, const HostAppFlows& flows,
                                       AppHostEdge edge, double psi, double eps) {
    const auto& [k_star, j_star] = edge;
    if (k_star >= flows.app_count() || j_star >= flows.host_count()) {
        throw ValidationError("hardening edge index out of range");
    }
    PropagationOperator out = j;
    const double delta = psi - eps;
    if (delta == 0.0) return out;

    // Row j* loses delta at every source with a flow (i, k*, j*).
    const auto cols = out.m.row_cols(j_star);
    auto vals = out.m.row_vals_mut(j_star);
    for (std::uint32_t src : flows.sources_into(k_star, j_star)) {
        const auto it = std::lower_bound(cols.begin(), cols.end(), src);
        if (it == cols.end() || *it != src) {
            throw ValidationError("propagation operator lacks a slot for a hardened flow");
        }
        vals[static_cast<std::size_t>(it - cols.begin())] -= delta;
    }
    return out;
}

} // namespace latmove
