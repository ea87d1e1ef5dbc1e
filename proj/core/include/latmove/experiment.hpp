#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "latmove/graph.hpp"
#include "latmove/hardening.hpp"
#include "latmove/segmentation.hpp"

namespace latmove {

enum class SegmentationStrategy { GreedyScore, GreedyScoreRecalc, UserFirst, HostFirst };
enum class EdgeHardeningStrategy { GreedyPhi, GreedyPhiRecalc, MaxPHeuristic };
enum class NodeHardeningStrategy { Rho, RhoRowSum, MinAHeuristic };

std::string to_string(SegmentationStrategy s);
std::string to_string(EdgeHardeningStrategy s);
std::string to_string(NodeHardeningStrategy s);

SegmentationStrategy segmentation_strategy_from(const std::string& name);
EdgeHardeningStrategy edge_strategy_from(const std::string& name);
NodeHardeningStrategy node_strategy_from(const std::string& name);

struct CurvePoint {
    double budget_fraction = 0.0;
    double mean_budget = 0.0;          // realized absolute actions, averaged over trials
    double mean_reachability = 0.0;
    double std_reachability = 0.0;     // population standard deviation
    double mean_new_account_fraction = 0.0; // segmentation curves only
};

struct Curve {
    std::string strategy;
    std::vector<CurvePoint> points;
};

// Reachability-versus-budget curves for a set of strategies, averaged over
// randomized trials. All randomness derives from `seed` through fixed-stride
// per-trial streams, so results are reproducible bit for bit.
struct ExperimentResult {
    std::string kind;
    std::vector<double> budget_fractions;
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    std::vector<Curve> curves;
    // per_trial[c][b][t]: curve c, budget b, trial t.
    std::vector<std::vector<std::vector<double>>> per_trial;
};

// Per-trial draws follow the experiment protocol: the compromise seed set,
// the probability matrix (same nonzero fraction as the base), and the
// posture are redrawn each trial.
struct TrialProtocol {
    std::size_t trials = 10;
    std::uint64_t seed = 0;
    std::size_t initial_compromised = 0;  // 0: max(1, round(0.001 * N))
    double p_nonzero_fraction = -1.0;     // <0: measured from the base P
    double epsilon = 1e-5;
    int max_hops = 0;                     // 0: host count
};

ExperimentResult run_segmentation_experiment(const BipartiteAccessGraph& g,
                                             const HostAppFlows& flows,
                                             const CompromiseProbabilities& base_p,
                                             const SecurityPosture& base_a,
                                             const std::vector<SegmentationStrategy>& strategies,
                                             const std::vector<double>& budget_fractions,
                                             const TrialProtocol& protocol);

enum class HardeningKind { Edge, Node };

ExperimentResult run_hardening_experiment(const BipartiteAccessGraph& g,
                                          const HostAppFlows& flows,
                                          const CompromiseProbabilities& base_p,
                                          const SecurityPosture& base_a, HardeningKind kind,
                                          const std::vector<std::string>& strategies,
                                          const std::vector<double>& budget_fractions,
                                          const TrialProtocol& protocol);

// Chains one segmentation, one edge-hardening, and one node-hardening
// strategy at shared budget fractions of their respective action spaces.
ExperimentResult run_joint_experiment(const BipartiteAccessGraph& g, const HostAppFlows& flows,
                                      const CompromiseProbabilities& base_p,
                                      const SecurityPosture& base_a,
                                      SegmentationStrategy seg, EdgeHardeningStrategy edge,
                                      NodeHardeningStrategy node,
                                      const std::vector<double>& budget_fractions,
                                      const TrialProtocol& protocol);

} // namespace latmove
