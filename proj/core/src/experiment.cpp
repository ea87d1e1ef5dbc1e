#include "latmove/experiment.hpp"

#include <algorithm>
#include <cmath>

#include "latmove/errors.hpp"
#include "latmove/reachability.hpp"
#include "latmove/rng.hpp"
#include "latmove/synthetic.hpp"

namespace latmove {

namespace {

struct TrialDraw {
    CompromiseProbabilities p;
    SecurityPosture a;
    std::vector<std::uint8_t> r0;
};

std::uint64_t trial_seed(std::uint64_t master, std::size_t trial) {
    return Rng::split(master, 100 + trial).next_u64();
}

TrialDraw draw_trial(const BipartiteAccessGraph& g, const HostAppFlows& flows,
                     const TrialProtocol& protocol, double p_fraction, std::size_t trial) {
    const std::size_t n = g.host_count();
    const std::uint64_t seed = trial_seed(protocol.seed, trial);
    const std::size_t seeds = protocol.initial_compromised > 0
                                  ? protocol.initial_compromised
                                  : std::max<std::size_t>(
                                        1, static_cast<std::size_t>(std::llround(0.001 * n)));
    return TrialDraw{gen_random_P(flows.app_count(), n, p_fraction, seed),
                     gen_random_posture(n, seed), pick_initial_compromise(n, seeds, seed)};
}

double measured_fraction(const CompromiseProbabilities& p) {
    const std::size_t cells = p.app_count() * p.host_count();
    return cells == 0 ? 0.0
                      : static_cast<double>(p.nonzero_count()) / static_cast<double>(cells);
}

void validate_fractions(const std::vector<double>& fractions) {
    if (fractions.empty()) throw ValidationError("at least one budget is required");
    for (double f : fractions) {
        if (!(f >= 0.0 && f <= 1.0)) {
            throw ValidationError("budget fraction outside [0, 1] exceeds the action space");
        }
    }
}

std::size_t scaled_budget(double fraction, std::size_t max_actions) {
    return static_cast<std::size_t>(std::llround(fraction * static_cast<double>(max_actions)));
}

double evaluate(const InducedHostMatrix& b, const PropagationOperator& j,
                const SecurityPosture& a, const std::vector<std::uint8_t>& r0, int max_hops) {
    const auto trace = tripartite_cascade(b, j, a, r0, max_hops);
    return reachability_fraction(trace.final_state());
}

void fill_statistics(ExperimentResult& result) {
    for (std::size_t c = 0; c < result.curves.size(); ++c) {
        for (std::size_t bIdx = 0; bIdx < result.budget_fractions.size(); ++bIdx) {
            const auto& samples = result.per_trial[c][bIdx];
            double mean = 0.0;
            for (double v : samples) mean += v;
            mean /= static_cast<double>(samples.size());
            double var = 0.0;
            for (double v : samples) var += (v - mean) * (v - mean);
            var /= static_cast<double>(samples.size());
            result.curves[c].points[bIdx].mean_reachability = mean;
            result.curves[c].points[bIdx].std_reachability = std::sqrt(var);
        }
    }
}

SegmentationPlan plan_segmentation(const BipartiteAccessGraph& g, SegmentationStrategy s,
                                   std::size_t q) {
    switch (s) {
        case SegmentationStrategy::GreedyScore:
            return greedy_segment(g, q, /*recalculate=*/false);
        case SegmentationStrategy::GreedyScoreRecalc:
            return greedy_segment(g, q, /*recalculate=*/true);
        case SegmentationStrategy::UserFirst:
            return degree_first_segment(g, q, DegreeFirstMode::UserFirst);
        case SegmentationStrategy::HostFirst:
            return degree_first_segment(g, q, DegreeFirstMode::HostFirst);
    }
    throw ValidationError("unknown segmentation strategy");
}

} // namespace

std::string to_string(SegmentationStrategy s) {
    switch (s) {
        case SegmentationStrategy::GreedyScore: return "greedy-score";
        case SegmentationStrategy::GreedyScoreRecalc: return "greedy-score-recalc";
        case SegmentationStrategy::UserFirst: return "user-first";
        case SegmentationStrategy::HostFirst: return "host-first";
    }
    return "?";
}

std::string to_string(EdgeHardeningStrategy s) {
    switch (s) {
        case EdgeHardeningStrategy::GreedyPhi: return "greedy-phi";
        case EdgeHardeningStrategy::GreedyPhiRecalc: return "greedy-phi-recalc";
        case EdgeHardeningStrategy::MaxPHeuristic: return "max-p";
    }
    return "?";
}

std::string to_string(NodeHardeningStrategy s) {
    switch (s) {
        case NodeHardeningStrategy::Rho: return "rho";
        case NodeHardeningStrategy::RhoRowSum: return "rho-j";
        case NodeHardeningStrategy::MinAHeuristic: return "min-a";
    }
    return "?";
}

SegmentationStrategy segmentation_strategy_from(const std::string& name) {
    if (name == "score" || name == "greedy-score") return SegmentationStrategy::GreedyScore;
    if (name == "score-recalc" || name == "greedy-score-recalc")
        return SegmentationStrategy::GreedyScoreRecalc;
    if (name == "user-first") return SegmentationStrategy::UserFirst;
    if (name == "host-first") return SegmentationStrategy::HostFirst;
    throw ValidationError("unknown segmentation strategy: " + name);
}

EdgeHardeningStrategy edge_strategy_from(const std::string& name) {
    if (name == "phi" || name == "greedy-phi") return EdgeHardeningStrategy::GreedyPhi;
    if (name == "phi-recalc" || name == "greedy-phi-recalc")
        return EdgeHardeningStrategy::GreedyPhiRecalc;
    if (name == "max-p") return EdgeHardeningStrategy::MaxPHeuristic;
    throw ValidationError("unknown edge hardening strategy: " + name);
}

NodeHardeningStrategy node_strategy_from(const std::string& name) {
    if (name == "rho") return NodeHardeningStrategy::Rho;
    if (name == "rho-j") return NodeHardeningStrategy::RhoRowSum;
    if (name == "min-a") return NodeHardeningStrategy::MinAHeuristic;
    throw ValidationError("unknown node hardening strategy: " + name);
}

ExperimentResult run_segmentation_experiment(const BipartiteAccessGraph& g,
                                             const HostAppFlows& flows,
                                             const CompromiseProbabilities& base_p,
                                             const SecurityPosture& base_a,
                                             const std::vector<SegmentationStrategy>& strategies,
                                             const std::vector<double>& budget_fractions,
                                             const TrialProtocol& protocol) {
    validate_fractions(budget_fractions);
    if (strategies.empty()) throw ValidationError("at least one strategy is required");
    if (base_a.host_count() != g.host_count()) {
        throw ShapeMismatchError("posture length does not match host count");
    }
    const double p_fraction = protocol.p_nonzero_fraction >= 0.0 ? protocol.p_nonzero_fraction
                                                                 : measured_fraction(base_p);
    const int max_hops = protocol.max_hops > 0 ? protocol.max_hops
                                               : static_cast<int>(g.host_count());

    ExperimentResult result;
    result.kind = "segmentation";
    result.budget_fractions = budget_fractions;
    result.trials = protocol.trials;
    result.seed = protocol.seed;

    // Plans depend only on the graph; compute them once per strategy/budget.
    struct Prepared {
        InducedHostMatrix b;
        double account_fraction;
        std::size_t removed;
    };
    std::vector<std::vector<Prepared>> prepared(strategies.size());
    for (std::size_t s = 0; s < strategies.size(); ++s) {
        for (double f : budget_fractions) {
            const std::size_t q = scaled_budget(f, g.edge_count());
            if (q == 0) {
                prepared[s].push_back({induced_host_matrix(g), 0.0, 0});
                continue;
            }
            const auto plan = plan_segmentation(g, strategies[s], q);
            auto [modified, fraction] = apply_segmentation(g, plan);
            prepared[s].push_back({induced_host_matrix(modified), fraction, q});
        }
        Curve curve;
        curve.strategy = to_string(strategies[s]);
        for (std::size_t bIdx = 0; bIdx < budget_fractions.size(); ++bIdx) {
            CurvePoint pt;
            pt.budget_fraction = budget_fractions[bIdx];
            pt.mean_budget = static_cast<double>(prepared[s][bIdx].removed);
            pt.mean_new_account_fraction = prepared[s][bIdx].account_fraction;
            curve.points.push_back(pt);
        }
        result.curves.push_back(std::move(curve));
    }

    result.per_trial.assign(strategies.size(),
                            std::vector<std::vector<double>>(budget_fractions.size()));
    for (std::size_t t = 0; t < protocol.trials; ++t) {
        const auto draw = draw_trial(g, flows, protocol, p_fraction, t);
        const auto j_op = propagation_operator(flows, draw.p);
        for (std::size_t s = 0; s < strategies.size(); ++s) {
            for (std::size_t bIdx = 0; bIdx < budget_fractions.size(); ++bIdx) {
                const double reach =
                    evaluate(prepared[s][bIdx].b, j_op, draw.a, draw.r0, max_hops);
                result.per_trial[s][bIdx].push_back(reach);
            }
        }
    }
    fill_statistics(result);
    return result;
}

ExperimentResult run_hardening_experiment(const BipartiteAccessGraph& g,
                                          const HostAppFlows& flows,
                                          const CompromiseProbabilities& base_p,
                                          const SecurityPosture& base_a, HardeningKind kind,
                                          const std::vector<std::string>& strategies,
                                          const std::vector<double>& budget_fractions,
                                          const TrialProtocol& protocol) {
    validate_fractions(budget_fractions);
    if (strategies.empty()) throw ValidationError("at least one strategy is required");
    if (base_a.host_count() != g.host_count()) {
        throw ShapeMismatchError("posture length does not match host count");
    }
    const double p_fraction = protocol.p_nonzero_fraction >= 0.0 ? protocol.p_nonzero_fraction
                                                                 : measured_fraction(base_p);
    const int max_hops = protocol.max_hops > 0 ? protocol.max_hops
                                               : static_cast<int>(g.host_count());
    const EpsilonMap eps(protocol.epsilon);
    const auto b_op = induced_host_matrix(g);

    ExperimentResult result;
    result.kind = kind == HardeningKind::Edge ? "edge-hardening" : "node-hardening";
    result.budget_fractions = budget_fractions;
    result.trials = protocol.trials;
    result.seed = protocol.seed;
    for (const auto& s : strategies) {
        Curve curve;
        curve.strategy = s;
        curve.points.assign(budget_fractions.size(), {});
        for (std::size_t bIdx = 0; bIdx < budget_fractions.size(); ++bIdx) {
            curve.points[bIdx].budget_fraction = budget_fractions[bIdx];
        }
        result.curves.push_back(std::move(curve));
    }
    result.per_trial.assign(strategies.size(),
                            std::vector<std::vector<double>>(budget_fractions.size()));

    const double max_fraction =
        *std::max_element(budget_fractions.begin(), budget_fractions.end());

    for (std::size_t t = 0; t < protocol.trials; ++t) {
        const auto draw = draw_trial(g, flows, protocol, p_fraction, t);

        if (kind == HardeningKind::Edge) {
            const std::size_t eligible = eligible_edges(flows, draw.p, eps).size();
            const std::size_t max_eta = scaled_budget(max_fraction, eligible);
            for (std::size_t s = 0; s < strategies.size(); ++s) {
                const auto strategy = edge_strategy_from(strategies[s]);
                EdgeHardeningPlan plan{{}, {}, {}, draw.p, {}, {}};
                if (max_eta > 0) {
                    switch (strategy) {
                        case EdgeHardeningStrategy::GreedyPhi:
                            plan = greedy_edge_harden(flows, draw.p, max_eta, eps, false);
                            break;
                        case EdgeHardeningStrategy::GreedyPhiRecalc:
                            plan = greedy_edge_harden(flows, draw.p, max_eta, eps, true);
                            break;
                        case EdgeHardeningStrategy::MaxPHeuristic:
                            plan = max_p_heuristic_harden(flows, draw.p, max_eta, eps);
                            break;
                    }
                }
                for (std::size_t bIdx = 0; bIdx < budget_fractions.size(); ++bIdx) {
                    const std::size_t eta = scaled_budget(budget_fractions[bIdx], eligible);
                    CompromiseProbabilities hardened = draw.p;
                    for (std::size_t z = 0; z < eta; ++z) {
                        hardened.set(plan.hardened_edges[z].first, plan.hardened_edges[z].second,
                                     plan.epsilons[z]);
                    }
                    const auto j_op = propagation_operator(flows, hardened);
                    result.per_trial[s][bIdx].push_back(
                        evaluate(b_op, j_op, draw.a, draw.r0, max_hops));
                    result.curves[s].points[bIdx].mean_budget +=
                        static_cast<double>(eta) / static_cast<double>(protocol.trials);
                }
            }
        } else {
            const auto j_op = propagation_operator(flows, draw.p);
            const auto y = leading_eigenpair_nonnegative(j_op, kDefaultEigTolerance,
                                                         kPlannerEigMaxIterations);
            const std::size_t n = g.host_count();
            for (std::size_t s = 0; s < strategies.size(); ++s) {
                const auto strategy = node_strategy_from(strategies[s]);
                std::vector<double> scores;
                switch (strategy) {
                    case NodeHardeningStrategy::Rho:
                        scores = node_scores(flows, draw.p, j_op, y, NodeScoreKind::Rho,
                                             draw.a, eps);
                        break;
                    case NodeHardeningStrategy::RhoRowSum:
                        scores = node_scores(flows, draw.p, j_op, y, NodeScoreKind::RhoRowSum,
                                             draw.a, eps);
                        break;
                    case NodeHardeningStrategy::MinAHeuristic:
                        scores.assign(n, 0.0);
                        for (std::uint32_t jj = 0; jj < n; ++jj) scores[jj] = -draw.a.at(jj);
                        break;
                }
                const std::size_t max_zeta = scaled_budget(max_fraction, n);
                NodeHardeningPlan plan{{}, {}, {}, draw.a, scores};
                if (max_zeta > 0) {
                    plan = greedy_node_harden(scores, max_zeta, {}, draw.a);
                }
                for (std::size_t bIdx = 0; bIdx < budget_fractions.size(); ++bIdx) {
                    const std::size_t zeta = scaled_budget(budget_fractions[bIdx], n);
                    auto levels = draw.a.levels();
                    for (std::size_t z = 0; z < zeta; ++z) {
                        levels[plan.hardened_hosts[z]] = plan.alphas[z];
                    }
                    const SecurityPosture hardened(std::move(levels));
                    result.per_trial[s][bIdx].push_back(
                        evaluate(b_op, j_op, hardened, draw.r0, max_hops));
                    result.curves[s].points[bIdx].mean_budget +=
                        static_cast<double>(zeta) / static_cast<double>(protocol.trials);
                }
            }
        }
    }
    fill_statistics(result);
    return result;
}

ExperimentResult run_joint_experiment(const BipartiteAccessGraph& g, const HostAppFlows& flows,
                                      const CompromiseProbabilities& base_p,
                                      const SecurityPosture& base_a,
                                      SegmentationStrategy seg, EdgeHardeningStrategy edge,
                                      NodeHardeningStrategy node,
                                      const std::vector<double>& budget_fractions,
                                      const TrialProtocol& protocol) {
    validate_fractions(budget_fractions);
    if (base_a.host_count() != g.host_count()) {
        throw ShapeMismatchError("posture length does not match host count");
    }
    const double p_fraction = protocol.p_nonzero_fraction >= 0.0 ? protocol.p_nonzero_fraction
                                                                 : measured_fraction(base_p);
    const int max_hops = protocol.max_hops > 0 ? protocol.max_hops
                                               : static_cast<int>(g.host_count());
    const EpsilonMap eps(protocol.epsilon);
    const std::size_t n = g.host_count();

    ExperimentResult result;
    result.kind = "joint";
    result.budget_fractions = budget_fractions;
    result.trials = protocol.trials;
    result.seed = protocol.seed;
    Curve curve;
    curve.strategy = to_string(seg) + "+" + to_string(edge) + "+" + to_string(node);
    curve.points.assign(budget_fractions.size(), {});
    for (std::size_t bIdx = 0; bIdx < budget_fractions.size(); ++bIdx) {
        curve.points[bIdx].budget_fraction = budget_fractions[bIdx];
    }
    result.curves.push_back(std::move(curve));
    result.per_trial.assign(1, std::vector<std::vector<double>>(budget_fractions.size()));

    // Segmented operators are trial-independent.
    std::vector<InducedHostMatrix> b_ops;
    std::vector<double> account_fractions;
    for (double f : budget_fractions) {
        const std::size_t q = scaled_budget(f, g.edge_count());
        if (q == 0) {
            b_ops.push_back(induced_host_matrix(g));
            account_fractions.push_back(0.0);
            continue;
        }
        const auto plan = plan_segmentation(g, seg, q);
        auto [modified, fraction] = apply_segmentation(g, plan);
        b_ops.push_back(induced_host_matrix(modified));
        account_fractions.push_back(fraction);
    }
    for (std::size_t bIdx = 0; bIdx < budget_fractions.size(); ++bIdx) {
        result.curves[0].points[bIdx].mean_new_account_fraction = account_fractions[bIdx];
    }

    for (std::size_t t = 0; t < protocol.trials; ++t) {
        const auto draw = draw_trial(g, flows, protocol, p_fraction, t);
        for (std::size_t bIdx = 0; bIdx < budget_fractions.size(); ++bIdx) {
            const double f = budget_fractions[bIdx];

            CompromiseProbabilities hardened_p = draw.p;
            const std::size_t eligible = eligible_edges(flows, draw.p, eps).size();
            const std::size_t eta = scaled_budget(f, eligible);
            if (eta > 0) {
                EdgeHardeningPlan plan =
                    edge == EdgeHardeningStrategy::MaxPHeuristic
                        ? max_p_heuristic_harden(flows, draw.p, eta, eps)
                        : greedy_edge_harden(flows, draw.p, eta, eps,
                                             edge == EdgeHardeningStrategy::GreedyPhiRecalc);
                hardened_p = plan.resulting_p;
            }
            const auto j_op = propagation_operator(flows, hardened_p);

            SecurityPosture hardened_a = draw.a;
            const std::size_t zeta = scaled_budget(f, n);
            if (zeta > 0) {
                std::vector<double> scores;
                const auto y = leading_eigenpair_nonnegative(j_op, kDefaultEigTolerance,
                                                         kPlannerEigMaxIterations);
                switch (node) {
                    case NodeHardeningStrategy::Rho:
                        scores = node_scores(flows, hardened_p, j_op, y, NodeScoreKind::Rho,
                                             draw.a, eps);
                        break;
                    case NodeHardeningStrategy::RhoRowSum:
                        scores = node_scores(flows, hardened_p, j_op, y,
                                             NodeScoreKind::RhoRowSum, draw.a, eps);
                        break;
                    case NodeHardeningStrategy::MinAHeuristic:
                        scores.assign(n, 0.0);
                        for (std::uint32_t jj = 0; jj < n; ++jj) scores[jj] = -draw.a.at(jj);
                        break;
                }
                hardened_a = greedy_node_harden(scores, zeta, {}, draw.a).resulting_posture;
            }

            result.per_trial[0][bIdx].push_back(
                evaluate(b_ops[bIdx], j_op, hardened_a, draw.r0, max_hops));
        }
    }
    fill_statistics(result);
    return result;
}

} // namespace latmove
