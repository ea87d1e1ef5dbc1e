#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "latmove/graph.hpp"
#include "latmove/spectral.hpp"

namespace latmove {

// Per-edge removal scores over the existing edges of A_C, plus the eigenpair
// they were computed from. score(i, j) = 2 (A_C u)_i u_j - u_j^2.
struct EdgeScoreTable {
    std::vector<Edge> edges;        // sorted (user, host)
    std::vector<double> scores;     // aligned with edges
    LeadingEigenpair eigenpair;

    double score_of(const Edge& e) const;
};

// Output of the segmentation planners. Removal order is the greedy selection
// order; each affected user gets exactly one new account holding all of that
// user's removed hosts.
struct SegmentationPlan {
    std::vector<Edge> removed_edges;
    std::map<std::uint32_t, std::vector<std::uint32_t>> new_accounts; // user -> hosts, ascending
    BipartiteAccessGraph resulting_graph;
    std::vector<double> selected_scores;  // score of each removal at selection time
    // Spectral radius of B before any removal, after pruning the removed
    // edges, and after re-linking through the new accounts. The account step
    // can partially undo the pruning reduction; both values keep that visible.
    double lambda_before = 0.0;
    double lambda_after_removal = 0.0;
    double lambda_after_accounts = 0.0;
    std::vector<double> lambda_trace;     // recalculating planners: lambda at each step
};

enum class DegreeFirstMode { UserFirst, HostFirst };

EdgeScoreTable edge_scores(const BipartiteAccessGraph& g, const LeadingEigenpair& eig);

// Eq-(10) set score of a removal set; nonnegative, monotone, submodular.
double set_score_f(const BipartiteAccessGraph& g, const LeadingEigenpair& eig,
                   const std::vector<Edge>& removal_set);

// Greedy score segmentation. Without recalculation the q best-scored edges
// of a single pass are removed; with recalculation the eigenvector and
// scores are recomputed after each removal. Ties break on smallest
// (user, host).
SegmentationPlan greedy_segment(const BipartiteAccessGraph& g, std::size_t q,
                                bool recalculate,
                                double tolerance = kDefaultEigTolerance,
                                int max_iterations = kPlannerEigMaxIterations);

// Degree-driven planners: user-first picks the max-degree user then its
// max-degree host; host-first does the reverse.
SegmentationPlan degree_first_segment(const BipartiteAccessGraph& g, std::size_t q,
                                      DegreeFirstMode mode);

// Validates a plan against g and rebuilds the segmented graph; returns it
// with the fraction of newly created accounts |accounts| / U.
std::pair<BipartiteAccessGraph, double> apply_segmentation(const BipartiteAccessGraph& g,
                                                           const SegmentationPlan& plan);

// Segmented graph construction from a removal list alone (planner backend).
BipartiteAccessGraph segmented_graph(const BipartiteAccessGraph& g,
                                     const std::vector<Edge>& removed_edges);

} // namespace latmove
