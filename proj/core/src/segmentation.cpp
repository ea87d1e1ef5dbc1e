#include "latmove/segmentation.hpp"

#include <algorithm>
#include <cmath>

#include "latmove/errors.hpp"

namespace latmove {

namespace {

std::map<std::uint32_t, std::vector<std::uint32_t>> group_by_user(
    const std::vector<Edge>& removed) {
    std::map<std::uint32_t, std::vector<std::uint32_t>> accounts;
    for (const auto& [i, j] : removed) accounts[i].push_back(j);
    for (auto& [i, hosts] : accounts) {
        std::sort(hosts.begin(), hosts.end());
        hosts.erase(std::unique(hosts.begin(), hosts.end()), hosts.end());
    }
    return accounts;
}

std::shared_ptr<const EntityIndex> extend_index_with_accounts(
    const EntityIndex& index,
    const std::map<std::uint32_t, std::vector<std::uint32_t>>& accounts) {
    EntityIndexBuilder builder;
    for (const auto& u : index.users()) builder.intern_user(u);
    for (const auto& h : index.hosts()) builder.intern_host(h);
    for (const auto& a : index.apps()) builder.intern_app(a);
    for (const auto& [user, hosts] : accounts) {
        (void)hosts;
        std::string candidate = index.user_id(user) + "+seg";
        while (index.has_user(candidate)) candidate += "+";
        builder.intern_user(candidate);
    }
    return std::make_shared<const EntityIndex>(builder.build());
}

double lambda_of(const BipartiteAccessGraph& g, double tolerance, int max_iterations) {
    return leading_eigenpair_symmetric(induced_host_matrix(g), tolerance, max_iterations).value;
}

SegmentationPlan finalize_plan(const BipartiteAccessGraph& g, std::vector<Edge> removed,
                               std::vector<double> selected_scores,
                               std::vector<double> lambda_trace, double tolerance,
                               int max_iterations) {
    auto accounts = group_by_user(removed);
    auto graph = segmented_graph(g, removed);
    SegmentationPlan plan{std::move(removed), std::move(accounts), std::move(graph),
                          std::move(selected_scores), 0.0, 0.0, 0.0, {}};
    plan.lambda_before = lambda_of(g, tolerance, max_iterations);

    // Pruned graph only (removed edges gone, no account rows yet).
    std::set<Edge> removed_set(plan.removed_edges.begin(), plan.removed_edges.end());
    std::vector<Edge> kept;
    for (const auto& e : g.edges()) {
        if (removed_set.find(e) == removed_set.end()) kept.push_back(e);
    }
    BipartiteAccessGraph pruned(g.index_ptr(), std::move(kept));
    plan.lambda_after_removal = lambda_of(pruned, tolerance, max_iterations);
    plan.lambda_after_accounts = lambda_of(plan.resulting_graph, tolerance, max_iterations);
    plan.lambda_trace = std::move(lambda_trace);
    return plan;
}

void validate_budget(const BipartiteAccessGraph& g, std::size_t q) {
    if (q < 1) throw ValidationError("segmentation budget q must be >= 1");
    if (q > g.edge_count()) {
        throw ValidationError("segmentation budget q exceeds edge count " +
                              std::to_string(g.edge_count()));
    }
}

} // namespace

double EdgeScoreTable::score_of(const Edge& e) const {
    const auto it = std::lower_bound(edges.begin(), edges.end(), e);
    if (it == edges.end() || *it != e) {
        throw ValidationError("edge not present in score table");
    }
    return scores[static_cast<std::size_t>(it - edges.begin())];
}

EdgeScoreTable edge_scores(const BipartiteAccessGraph& g, const LeadingEigenpair& eig) {
    const auto& u = eig.vector;
    if (u.size() != g.host_count()) {
        throw ShapeMismatchError("eigenvector length does not match host count");
    }
    const auto c = g.matrix().matvec(u); // c_i = (A_C u)_i
    EdgeScoreTable table;
    table.edges = g.edges();
    table.scores.reserve(table.edges.size());
    for (const auto& [i, j] : table.edges) {
        table.scores.push_back(2.0 * c[i] * u[j] - u[j] * u[j]);
    }
    table.eigenpair = eig;
    return table;
}

double set_score_f(const BipartiteAccessGraph& g, const LeadingEigenpair& eig,
                   const std::vector<Edge>& removal_set) {
    const auto& u = eig.vector;
    const auto c = g.matrix().matvec(u);
    double linear = 0.0;
    std::map<std::uint32_t, double> removed_mass; // user -> sum of u_j over removed hosts
    std::set<Edge> seen;
    for (const auto& e : removal_set) {
        if (!g.has_edge(e.first, e.second)) {
            throw ValidationError("removal set contains an edge not in the graph");
        }
        if (!seen.insert(e).second) continue;
        linear += c[e.first] * u[e.second];
        removed_mass[e.first] += u[e.second];
    }
    double quadratic = 0.0;
    for (const auto& [user, mass] : removed_mass) quadratic += mass * mass;
    return 2.0 * linear - quadratic;
}

SegmentationPlan greedy_segment(const BipartiteAccessGraph& g, std::size_t q,
                                bool recalculate, double tolerance, int max_iterations) {
    validate_budget(g, q);

    std::vector<Edge> removed;
    std::vector<double> selected_scores;
    std::vector<double> lambda_trace;

    if (!recalculate) {
        const auto eig = leading_eigenpair_symmetric(induced_host_matrix(g), tolerance,
                                                     max_iterations);
        const auto table = edge_scores(g, eig);
        std::vector<std::size_t> order(table.edges.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (table.scores[a] != table.scores[b]) return table.scores[a] > table.scores[b];
            return table.edges[a] < table.edges[b];
        });
        for (std::size_t z = 0; z < q; ++z) {
            removed.push_back(table.edges[order[z]]);
            selected_scores.push_back(table.scores[order[z]]);
        }
    } else {
        std::vector<Edge> current = g.edges();
        auto index = g.index_ptr();
        for (std::size_t z = 0; z < q; ++z) {
            BipartiteAccessGraph working(index, current);
            const auto eig = leading_eigenpair_symmetric(induced_host_matrix(working),
                                                         tolerance, max_iterations);
            lambda_trace.push_back(eig.value);
            const auto table = edge_scores(working, eig);
            std::size_t best = 0;
            for (std::size_t i = 1; i < table.edges.size(); ++i) {
                if (table.scores[i] > table.scores[best] ||
                    (table.scores[i] == table.scores[best] &&
                     table.edges[i] < table.edges[best])) {
                    best = i;
                }
            }
            removed.push_back(table.edges[best]);
            selected_scores.push_back(table.scores[best]);
            current.erase(std::find(current.begin(), current.end(), table.edges[best]));
        }
        BipartiteAccessGraph final_pruned(index, current);
        lambda_trace.push_back(lambda_of(final_pruned, tolerance, max_iterations));
    }

    return finalize_plan(g, std::move(removed), std::move(selected_scores),
                         std::move(lambda_trace), tolerance, max_iterations);
}

SegmentationPlan degree_first_segment(const BipartiteAccessGraph& g, std::size_t q,
                                      DegreeFirstMode mode) {
    validate_budget(g, q);

    std::vector<Edge> current = g.edges();
    std::vector<Edge> removed;
    auto [du, dn] = degree_vectors(g);

    for (std::size_t z = 0; z < q; ++z) {
        Edge pick{0, 0};
        if (mode == DegreeFirstMode::UserFirst) {
            std::uint32_t best_user = 0;
            std::uint32_t best_deg = 0;
            for (std::uint32_t i = 0; i < du.size(); ++i) {
                if (du[i] > best_deg) {
                    best_deg = du[i];
                    best_user = i;
                }
            }
            std::uint32_t best_host = 0;
            std::uint32_t best_host_deg = 0;
            bool found = false;
            for (const auto& [i, j] : current) {
                if (i != best_user) continue;
                if (!found || dn[j] > best_host_deg) {
                    found = true;
                    best_host_deg = dn[j];
                    best_host = j;
                }
            }
            pick = {best_user, best_host};
        } else {
            std::uint32_t best_host = 0;
            std::uint32_t best_deg = 0;
            for (std::uint32_t j = 0; j < dn.size(); ++j) {
                if (dn[j] > best_deg) {
                    best_deg = dn[j];
                    best_host = j;
                }
            }
            std::uint32_t best_user = 0;
            std::uint32_t best_user_deg = 0;
            bool found = false;
            for (const auto& [i, j] : current) {
                if (j != best_host) continue;
                if (!found || du[i] > best_user_deg) {
                    found = true;
                    best_user_deg = du[i];
                    best_user = i;
                }
            }
            pick = {best_user, best_host};
        }
        removed.push_back(pick);
        du[pick.first] -= 1;
        dn[pick.second] -= 1;
        current.erase(std::find(current.begin(), current.end(), pick));
    }

    return finalize_plan(g, std::move(removed), {}, {}, kDefaultEigTolerance,
                         kPlannerEigMaxIterations);
}

BipartiteAccessGraph segmented_graph(const BipartiteAccessGraph& g,
                                     const std::vector<Edge>& removed_edges) {
    std::set<Edge> removed_set;
    for (const auto& e : removed_edges) {
        if (!g.has_edge(e.first, e.second)) {
            throw ValidationError("segmentation plan removes an edge not in the graph");
        }
        removed_set.insert(e);
    }
    const auto accounts = group_by_user(
        std::vector<Edge>(removed_set.begin(), removed_set.end()));
    auto index = extend_index_with_accounts(g.index(), accounts);

    std::vector<Edge> edges;
    for (const auto& e : g.edges()) {
        if (removed_set.find(e) == removed_set.end()) edges.push_back(e);
    }
    std::uint32_t next_user = static_cast<std::uint32_t>(g.user_count());
    for (const auto& [user, hosts] : accounts) {
        (void)user;
        for (std::uint32_t h : hosts) edges.push_back({next_user, h});
        ++next_user;
    }
    return BipartiteAccessGraph(std::move(index), std::move(edges));
}

std::pair<BipartiteAccessGraph, double> apply_segmentation(const BipartiteAccessGraph& g,
                                                           const SegmentationPlan& plan) {
    const auto expected_accounts = group_by_user(plan.removed_edges);
    if (expected_accounts != plan.new_accounts) {
        throw ValidationError("segmentation plan accounts are inconsistent with removals");
    }
    auto graph = segmented_graph(g, plan.removed_edges);
    const double fraction = g.user_count() == 0
                                ? 0.0
                                : static_cast<double>(plan.new_accounts.size()) /
                                      static_cast<double>(g.user_count());
    return {std::move(graph), fraction};
}

} // namespace latmove
