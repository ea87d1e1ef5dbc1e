#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "latmove/graph.hpp"
#include "latmove/spectral.hpp"

namespace latmove {

using AppHostEdge = std::pair<std::uint32_t, std::uint32_t>; // (app k, host j)

// Residual probabilities for hardened edges: a uniform default with
// per-edge overrides.
class EpsilonMap {
public:
    explicit EpsilonMap(double uniform = 1e-5) : default_(uniform) {}

    double at(AppHostEdge e) const {
        const auto it = overrides_.find(e);
        return it == overrides_.end() ? default_ : it->second;
    }
    void set(AppHostEdge e, double eps) { overrides_[e] = eps; }
    double default_value() const noexcept { return default_; }

private:
    double default_;
    std::map<AppHostEdge, double> overrides_;
};

struct EdgeHardeningPlan {
    std::vector<AppHostEdge> hardened_edges;  // greedy order
    std::vector<double> epsilons;             // residual per hardened edge
    std::vector<double> old_values;           // P value before hardening
    CompromiseProbabilities resulting_p;
    std::vector<double> selected_scores;      // phi at selection time
    std::vector<double> lambda_trace;         // recalculating planner only
};

struct NodeHardeningPlan {
    std::vector<std::uint32_t> hardened_hosts; // greedy order
    std::vector<double> alphas;                // new level per host
    std::vector<double> old_levels;            // level before hardening
    SecurityPosture resulting_posture;
    std::vector<double> scores;                // full score vector used
};

enum class NodeScoreKind { Rho, RhoPosture, RhoRowSum };

// phi((k, j)) = (P_kj - eps) * y_j * sum_i [A_k]_{ij} y_i; the quadratic
// form of the rank-structured hardening perturbation of J.
double edge_hardening_score(const LeadingEigenpair& y, const HostAppFlows& flows,
                            const CompromiseProbabilities& p, AppHostEdge edge, double eps);

// Edges eligible for hardening: at least one flow into j via k and
// P_kj > eps_kj. Sorted (k, j).
std::vector<AppHostEdge> eligible_edges(const HostAppFlows& flows,
                                        const CompromiseProbabilities& p,
                                        const EpsilonMap& eps);

// Greedy edge hardening. Without recalculation the eta best-phi edges of a
// single pass are hardened (that set maximizes phi over eta-subsets); with
// recalculation J is updated in place after each step and y recomputed.
EdgeHardeningPlan greedy_edge_harden(const HostAppFlows& flows,
                                     const CompromiseProbabilities& p, std::size_t eta,
                                     const EpsilonMap& eps, bool recalculate,
                                     double tolerance = kDefaultEigTolerance,
                                     int max_iterations = kPlannerEigMaxIterations);

// Baseline: harden eligible edges by descending P value.
EdgeHardeningPlan max_p_heuristic_harden(const HostAppFlows& flows,
                                         const CompromiseProbabilities& p, std::size_t eta,
                                         const EpsilonMap& eps);

// Node scores: Rho sums phi over applications, RhoPosture is 1/a_j (a_j = 0
// maps to +inf and ranks first), RhoRowSum is the row sum of J.
std::vector<double> node_scores(const HostAppFlows& flows, const CompromiseProbabilities& p,
                                const PropagationOperator& j, const LeadingEigenpair& y,
                                NodeScoreKind kind, const SecurityPosture& a,
                                const EpsilonMap& eps);

// Hardens the zeta top-scored hosts to their target level (default 1).
// Ties break on smallest host index.
NodeHardeningPlan greedy_node_harden(const std::vector<double>& scores, std::size_t zeta,
                                     const std::map<std::uint32_t, double>& alpha,
                                     const SecurityPosture& a, double default_alpha = 1.0);

// Baseline: harden hosts by ascending current level.
NodeHardeningPlan min_a_heuristic_harden(const SecurityPosture& a, std::size_t zeta,
                                         const std::map<std::uint32_t, double>& alpha,
                                         double default_alpha = 1.0);

// Rank-structured update of J after hardening (k*, j*) from value psi down
// to eps: only row j* changes. Equals full recomputation.
PropagationOperator efficient_J_update(const PropagationOperator& j, const HostAppFlows& flows,
                                       AppHostEdge edge, double psi, double eps);

} // namespace latmove
