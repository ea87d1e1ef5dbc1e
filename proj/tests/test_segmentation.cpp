#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "latmove/segmentation.hpp"
#include "support/oracles.hpp"

using namespace latmove;

namespace {

BipartiteAccessGraph two_by_two() {
    auto index = test::make_index(2, 2, 1);
    return build_user_host_graph({{"u0", "h0"}, {"u0", "h1"}, {"u1", "h1"}}, index);
}

} // namespace

TEST_SUITE_BEGIN("segmentation");

TEST_CASE("edge_scores on the closed-form 2x2 instance") {
    const auto g = two_by_two();
    const auto eig = leading_eigenpair_symmetric(induced_host_matrix(g));
    const auto table = edge_scores(g, eig);
    CHECK(table.score_of({0, 0}) == doctest::Approx(1.1708203932).epsilon(1e-8));
    CHECK(table.score_of({0, 1}) == doctest::Approx(1.6180339887).epsilon(1e-8));
    CHECK(table.score_of({1, 1}) == doctest::Approx(0.7236067977).epsilon(1e-8));
}

TEST_CASE("edge_scores single edge graph") {
    auto index = test::make_index(1, 1, 1);
    const auto g = build_user_host_graph({{"u0", "h0"}}, index);
    const auto eig = leading_eigenpair_symmetric(induced_host_matrix(g));
    const auto table = edge_scores(g, eig);
    CHECK(table.score_of({0, 0}) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("edge_scores match the direct formula entrywise") {
    Rng rng(51);
    for (int trial = 0; trial < 25; ++trial) {
        const auto g = test::random_graph(1 + rng.bounded(8), 1 + rng.bounded(8), 0.4, rng);
        if (g.edge_count() == 0) continue;
        const auto eig = leading_eigenpair_symmetric(induced_host_matrix(g));
        const auto table = edge_scores(g, eig);
        const auto& u = eig.vector;
        for (std::size_t e = 0; e < table.edges.size(); ++e) {
            const auto [i, j] = table.edges[e];
            double dot = 0.0; // u^T A_C^T e_i
            for (std::uint32_t h : g.hosts_of(i)) dot += u[h];
            const double direct = 2.0 * dot * u[j] - u[j] * u[j];
            CHECK(std::abs(table.scores[e] - direct) <= 1e-10);
        }
    }
}

TEST_CASE("set_score_f basics") {
    const auto g = two_by_two();
    const auto eig = leading_eigenpair_symmetric(induced_host_matrix(g));
    SUBCASE("empty set scores zero") {
        CHECK(set_score_f(g, eig, {}) == 0.0);
    }
    SUBCASE("singleton equals the edge score") {
        const auto table = edge_scores(g, eig);
        for (const auto& e : g.edges()) {
            CHECK(set_score_f(g, eig, {e}) == doctest::Approx(table.score_of(e)).epsilon(1e-12));
        }
    }
    SUBCASE("edge outside the graph is rejected") {
        CHECK_THROWS_AS(set_score_f(g, eig, {{1, 0}}), ValidationError);
    }
}

TEST_CASE("set_score_f equals the appendix double-sum form") {
    Rng rng(53);
    for (int trial = 0; trial < 30; ++trial) {
        const auto g = test::random_graph(1 + rng.bounded(6), 1 + rng.bounded(6), 0.5, rng);
        if (g.edge_count() == 0) continue;
        const auto eig = leading_eigenpair_symmetric(induced_host_matrix(g));
        const auto edges = g.edges();
        // A few random subsets per instance.
        for (int s = 0; s < 8; ++s) {
            std::vector<Edge> subset;
            for (const auto& e : edges) {
                if (rng.unit() < 0.4) subset.push_back(e);
            }
            const double direct = set_score_f(g, eig, subset);
            const double alt = test::set_score_alternative(g, eig.vector, subset);
            CHECK(std::abs(direct - alt) <= 1e-10);
            CHECK(direct >= -1e-12);
        }
    }
}

TEST_CASE("monotonicity and submodularity, exhaustive on small graphs") {
    Rng rng(59);
    int done = 0;
    while (done < 12) {
        const auto g = test::random_graph(2 + rng.bounded(3), 2 + rng.bounded(3), 0.5, rng);
        if (g.edge_count() < 2 || g.edge_count() > 7) continue;
        ++done;
        const auto eig = leading_eigenpair_symmetric(induced_host_matrix(g));
        const auto edges = g.edges();
        const std::size_t m = edges.size();
        auto subset_edges = [&](unsigned mask) {
            std::vector<Edge> out;
            for (std::size_t i = 0; i < m; ++i) {
                if (mask & (1u << i)) out.push_back(edges[i]);
            }
            return out;
        };
        std::vector<double> value(1u << m);
        for (unsigned mask = 0; mask < (1u << m); ++mask) {
            value[mask] = set_score_f(g, eig, subset_edges(mask));
        }
        for (unsigned small = 0; small < (1u << m); ++small) {
            for (unsigned big = small;; big = (big + 1) | small) {
                // monotone: f(big) >= f(small) whenever small is a subset
                CHECK(value[big] >= value[small] - 1e-10);
                // submodular: for e outside big, gain at big <= gain at small
                for (std::size_t e = 0; e < m; ++e) {
                    const unsigned bit = 1u << e;
                    if (big & bit) continue;
                    const double gain_big = value[big | bit] - value[big];
                    const double gain_small = value[small | bit] - value[small];
                    CHECK(gain_big <= gain_small + 1e-10);
                }
                if (big == ((1u << m) - 1)) break;
            }
        }
    }
}

TEST_CASE("greedy_segment") {
    SUBCASE("removes the top-scored edge") {
        const auto g = two_by_two();
        const auto plan = greedy_segment(g, 1, false);
        CHECK(plan.removed_edges == std::vector<Edge>{{0, 1}});
    }
    SUBCASE("q equal to the edge count removes everything") {
        const auto g = two_by_two();
        const auto plan = greedy_segment(g, g.edge_count(), false);
        CHECK(plan.removed_edges.size() == 3);
        CHECK(plan.new_accounts.size() == 2);
        CHECK(plan.new_accounts.at(0) == std::vector<std::uint32_t>{0, 1});
        CHECK(plan.new_accounts.at(1) == std::vector<std::uint32_t>{1});
    }
    SUBCASE("q of one gives identical plans with and without recalculation") {
        Rng rng(61);
        for (int trial = 0; trial < 10; ++trial) {
            const auto g = test::random_graph(2 + rng.bounded(5), 2 + rng.bounded(5), 0.5, rng);
            if (g.edge_count() == 0) continue;
            CHECK(greedy_segment(g, 1, false).removed_edges ==
                  greedy_segment(g, 1, true).removed_edges);
        }
    }
    SUBCASE("budget validation") {
        const auto g = two_by_two();
        CHECK_THROWS_AS(greedy_segment(g, 0, false), ValidationError);
        CHECK_THROWS_AS(greedy_segment(g, 4, false), ValidationError);
    }
}

TEST_CASE("degree_first_segment") {
    SUBCASE("user-first on the 2x2 instance") {
        const auto plan = degree_first_segment(two_by_two(), 1, DegreeFirstMode::UserFirst);
        CHECK(plan.removed_edges == std::vector<Edge>{{0, 1}});
    }
    SUBCASE("host-first on the 2x2 instance") {
        const auto plan = degree_first_segment(two_by_two(), 1, DegreeFirstMode::HostFirst);
        CHECK(plan.removed_edges == std::vector<Edge>{{0, 1}});
    }
    SUBCASE("star graph ties break lexicographically") {
        auto index = test::make_index(1, 4, 1);
        const auto g = build_user_host_graph(
            {{"u0", "h0"}, {"u0", "h1"}, {"u0", "h2"}, {"u0", "h3"}}, index);
        const auto user_first = degree_first_segment(g, 1, DegreeFirstMode::UserFirst);
        CHECK(user_first.removed_edges == std::vector<Edge>{{0, 0}});
        const auto host_first = degree_first_segment(g, 1, DegreeFirstMode::HostFirst);
        CHECK(host_first.removed_edges == std::vector<Edge>{{0, 0}});
    }
}

TEST_CASE("apply_segmentation") {
    const auto g = two_by_two();
    SUBCASE("removing both edges of one user") {
        SegmentationPlan plan = greedy_segment(g, 1, false);
        // Force a specific removal set: both edges of user 0.
        plan.removed_edges = {{0, 0}, {0, 1}};
        plan.new_accounts = {{0, {0, 1}}};
        plan.resulting_graph = segmented_graph(g, plan.removed_edges);
        auto [modified, fraction] = apply_segmentation(g, plan);
        CHECK(modified.user_count() == 3);
        CHECK(modified.host_count() == 2);
        CHECK(modified.matrix().at(0, 0) == 0.0);
        CHECK(modified.matrix().at(0, 1) == 0.0);
        CHECK(modified.matrix().at(1, 1) == 1.0);
        CHECK(modified.matrix().at(2, 0) == 1.0);
        CHECK(modified.matrix().at(2, 1) == 1.0);
        CHECK(fraction == 0.5);
    }
    SUBCASE("inconsistent plan is rejected") {
        SegmentationPlan plan = greedy_segment(g, 1, false);
        plan.new_accounts[5] = {0};
        CHECK_THROWS_AS(apply_segmentation(g, plan), ValidationError);
    }
    SUBCASE("one removal per user yields one account per user") {
        auto index = test::make_index(2, 2, 1);
        const auto g2 = build_user_host_graph(
            {{"u0", "h0"}, {"u0", "h1"}, {"u1", "h0"}, {"u1", "h1"}}, index);
        SegmentationPlan plan = greedy_segment(g2, 1, false);
        plan.removed_edges = {{0, 0}, {1, 1}};
        plan.new_accounts = {{0, {0}}, {1, {1}}};
        plan.resulting_graph = segmented_graph(g2, plan.removed_edges);
        auto [modified, fraction] = apply_segmentation(g2, plan);
        CHECK(fraction == 1.0); // 2 accounts / 2 users
        CHECK(modified.user_count() == 4);
    }
}

TEST_CASE("functionality preservation: per-human host sets are unchanged") {
    Rng rng(67);
    for (int trial = 0; trial < 20; ++trial) {
        const auto g = test::random_graph(2 + rng.bounded(5), 2 + rng.bounded(5), 0.5, rng);
        if (g.edge_count() < 2) continue;
        const std::size_t q = 1 + rng.bounded(g.edge_count());
        const auto plan = degree_first_segment(g, q, DegreeFirstMode::HostFirst);
        const auto& modified = plan.resulting_graph;
        // Map each new account back to its original user by name prefix.
        for (std::uint32_t user = 0; user < g.user_count(); ++user) {
            std::set<std::uint32_t> original(g.hosts_of(user).begin(), g.hosts_of(user).end());
            std::set<std::uint32_t> combined(modified.hosts_of(user).begin(),
                                             modified.hosts_of(user).end());
            const auto it = plan.new_accounts.find(user);
            if (it != plan.new_accounts.end()) {
                combined.insert(it->second.begin(), it->second.end());
            }
            CHECK(combined == original);
        }
    }
}

TEST_CASE("marginal greedy meets the submodular guarantee; top-q tracks it") {
    // The (1 - 1/q)^q guarantee is a consequence of submodularity for the
    // per-step marginal-argmax selection. The single-pass top-q variant can
    // fall short of it when one user's top-scored edges overlap (their
    // cross term is double-counted by the singleton scores), so only its
    // one-step optimality is asserted here.
    Rng rng(71);
    int done = 0;
    while (done < 15) {
        const auto g = test::random_graph(2 + rng.bounded(4), 2 + rng.bounded(4), 0.5, rng);
        if (g.edge_count() < 3 || g.edge_count() > 8) continue;
        ++done;
        const auto eig = leading_eigenpair_symmetric(induced_host_matrix(g));
        const auto edges = g.edges();
        for (std::size_t q = 1; q <= std::min<std::size_t>(3, edges.size()); ++q) {
            double best = 0.0;
            for (const auto& subset : test::subsets_of_size(edges.size(), q)) {
                std::vector<Edge> candidate;
                for (auto idx : subset) candidate.push_back(edges[idx]);
                best = std::max(best, set_score_f(g, eig, candidate));
            }

            // Marginal-argmax greedy on f.
            std::vector<Edge> chosen;
            for (std::size_t z = 0; z < q; ++z) {
                Edge arg{0, 0};
                double arg_value = -1.0;
                for (const auto& e : edges) {
                    if (std::find(chosen.begin(), chosen.end(), e) != chosen.end()) continue;
                    auto candidate = chosen;
                    candidate.push_back(e);
                    const double value = set_score_f(g, eig, candidate);
                    if (value > arg_value) {
                        arg_value = value;
                        arg = e;
                    }
                }
                chosen.push_back(arg);
            }
            const double marginal_value = set_score_f(g, eig, chosen);
            const double bound = std::pow(1.0 - 1.0 / static_cast<double>(q),
                                          static_cast<double>(q));
            CHECK(best - marginal_value <= bound * best + 1e-9);

            // Top-q never beats the optimum and matches it at q = 1.
            const auto plan = greedy_segment(g, q, false);
            const double top_q = set_score_f(g, eig, plan.removed_edges);
            CHECK(top_q <= best + 1e-9);
            if (q == 1) CHECK(top_q == doctest::Approx(best).epsilon(1e-9));
        }
    }
}

TEST_CASE("spectral radius bounds under removal") {
    Rng rng(73);
    for (int trial = 0; trial < 25; ++trial) {
        const auto g = test::random_graph(2 + rng.bounded(6), 2 + rng.bounded(6), 0.4, rng);
        if (g.edge_count() < 2) continue;
        const auto eig = leading_eigenpair_symmetric(induced_host_matrix(g));
        std::vector<Edge> removal;
        for (const auto& e : g.edges()) {
            if (rng.unit() < 0.3) removal.push_back(e);
        }
        const double f_value = set_score_f(g, eig, removal);

        std::set<Edge> removed(removal.begin(), removal.end());
        std::vector<Edge> kept;
        for (const auto& e : g.edges()) {
            if (removed.find(e) == removed.end()) kept.push_back(e);
        }
        BipartiteAccessGraph pruned(g.index_ptr(), kept);
        const auto pruned_eig = leading_eigenpair_symmetric(induced_host_matrix(pruned));
        CHECK(pruned_eig.value >= eig.value - f_value - 1e-8);
        CHECK(pruned_eig.value <= eig.value + 1e-8);
    }
}

TEST_CASE("recalculating greedy never raises the spectral radius") {
    // The decrease is strict when the pruned gram matrix stays irreducible;
    // with tied duplicate components the radius can sit on an untouched
    // component and stay flat even for a positive selected score.
    Rng rng(79);
    for (int trial = 0; trial < 10; ++trial) {
        const auto g = test::random_graph(3 + rng.bounded(4), 3 + rng.bounded(4), 0.5, rng);
        if (g.edge_count() < 3) continue;
        const std::size_t q = std::min<std::size_t>(4, g.edge_count());
        const auto plan = greedy_segment(g, q, true, 1e-12);
        REQUIRE(plan.lambda_trace.size() == q + 1);

        std::vector<Edge> current = g.edges();
        for (std::size_t z = 0; z + 1 < plan.lambda_trace.size(); ++z) {
            CHECK(plan.lambda_trace[z + 1] <= plan.lambda_trace[z] + 1e-8);
            current.erase(std::find(current.begin(), current.end(), plan.removed_edges[z]));
            const BipartiteAccessGraph pruned(g.index_ptr(), current);
            if (plan.selected_scores[z] > 1e-9 &&
                test::symmetric_irreducible(test::dense_gram_naive(pruned))) {
                CHECK(plan.lambda_trace[z + 1] < plan.lambda_trace[z]);
            }
        }
    }
}

TEST_CASE("degree bound after single removal (irreducible case)") {
    Rng rng(83);
    int checked = 0;
    while (checked < 30) {
        const auto g = test::random_graph(2 + rng.bounded(6), 2 + rng.bounded(6), 0.5, rng);
        if (g.edge_count() < 2) continue;
        const auto edges = g.edges();
        const auto& edge = edges[rng.bounded(edges.size())];

        std::vector<Edge> kept;
        for (const auto& e : edges) {
            if (e != edge) kept.push_back(e);
        }
        BipartiteAccessGraph pruned(g.index_ptr(), kept);
        const auto dense = test::dense_gram_naive(pruned);
        if (!test::symmetric_irreducible(dense)) continue;
        ++checked;

        const auto [du, dn] = degree_vectors(g);
        std::uint32_t du_max = 0, dn_max = 0;
        for (auto d : du) du_max = std::max(du_max, d);
        for (auto d : dn) dn_max = std::max(dn_max, d);

        // max_s [(d_i - 1) e_j - A_C^T e_i]_s over hosts s
        double correction = -1e300;
        for (std::uint32_t s = 0; s < g.host_count(); ++s) {
            double v = (s == edge.second ? static_cast<double>(du[edge.first]) - 1.0 : 0.0);
            v -= g.has_edge(edge.first, s) ? 1.0 : 0.0;
            correction = std::max(correction, v);
        }
        const double bound = static_cast<double>(du_max) * static_cast<double>(dn_max) -
                             correction;
        const auto pruned_eig = leading_eigenpair_symmetric(induced_host_matrix(pruned));
        CHECK(pruned_eig.value <= bound + 1e-8);
    }
}

TEST_SUITE_END();
