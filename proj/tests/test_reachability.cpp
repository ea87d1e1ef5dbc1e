#include <doctest.h>

#include "latmove/reachability.hpp"
#include "support/oracles.hpp"

using namespace latmove;

namespace {

InducedHostMatrix b_from_dense(const std::vector<std::vector<double>>& d) {
    std::vector<Triplet> t;
    for (std::uint32_t i = 0; i < d.size(); ++i) {
        for (std::uint32_t j = 0; j < d[i].size(); ++j) {
            if (d[i][j] != 0.0) t.push_back({i, j, d[i][j]});
        }
    }
    return {CsrMatrix::from_triplets(d.size(), d.size(), std::move(t))};
}

PropagationOperator j_from_dense(const std::vector<std::vector<double>>& d) {
    return {b_from_dense(d).m};
}

} // namespace

TEST_SUITE_BEGIN("reachability");

TEST_CASE("threshold_clamp") {
    CHECK(threshold_clamp(std::vector<double>{0.0, 0.5, 1.0}) ==
          std::vector<double>{0.0, 0.5, 1.0});
    CHECK(threshold_clamp(std::vector<double>{2.7}) == std::vector<double>{1.0});
    CHECK(threshold_clamp(std::vector<double>{0, 0, 0}) == std::vector<double>{0, 0, 0});
    CHECK_THROWS_AS(threshold_clamp(std::vector<double>{-0.1}), ValidationError);
}

TEST_CASE("indicator_exceeds is strict") {
    const SecurityPosture a3(std::vector<double>{0.3});
    CHECK(indicator_exceeds(std::vector<double>{0.5}, a3) == std::vector<std::uint8_t>{1});
    const SecurityPosture a5(std::vector<double>{0.5});
    CHECK(indicator_exceeds(std::vector<double>{0.5}, a5) == std::vector<std::uint8_t>{0});
    const SecurityPosture a1(std::vector<double>{1.0});
    CHECK(indicator_exceeds(std::vector<double>{1.0}, a1) == std::vector<std::uint8_t>{0});
}

TEST_CASE("user_host_cascade hand examples") {
    SUBCASE("spread through a shared user") {
        const auto b = b_from_dense({{1, 1}, {1, 2}});
        const auto trace = user_host_cascade(b, std::vector<std::uint8_t>{1, 0}, 4);
        CHECK(trace.final_state().r == std::vector<std::uint8_t>{1, 1});
        CHECK(trace.states[1].r == std::vector<std::uint8_t>{1, 1}); // one hop
        CHECK(trace.converged());
    }
    SUBCASE("no seed, no spread") {
        const auto b = b_from_dense({{1, 1}, {1, 2}});
        const auto trace = user_host_cascade(b, std::vector<std::uint8_t>{0, 0}, 4);
        CHECK(trace.final_state().r == std::vector<std::uint8_t>{0, 0});
    }
    SUBCASE("diagonal B spreads nothing") {
        const auto b = b_from_dense({{1, 0}, {0, 1}});
        const auto trace = user_host_cascade(b, std::vector<std::uint8_t>{1, 0}, 4);
        CHECK(trace.final_state().r == std::vector<std::uint8_t>{1, 0});
    }
}

TEST_CASE("host_app_cascade hand examples") {
    const auto j = j_from_dense({{0, 0.5}, {0.5, 0}});
    SUBCASE("low hardening lets the walk through") {
        const SecurityPosture a(std::vector<double>{0.3, 0.3});
        const auto trace = host_app_cascade(j, a, std::vector<std::uint8_t>{1, 0}, 4);
        CHECK(trace.final_state().r == std::vector<std::uint8_t>{1, 1});
    }
    SUBCASE("hardening level blocks the walk") {
        const SecurityPosture a(std::vector<double>{0.3, 0.6});
        const auto trace = host_app_cascade(j, a, std::vector<std::uint8_t>{1, 0}, 4);
        CHECK(trace.final_state().r == std::vector<std::uint8_t>{1, 0});
    }
    SUBCASE("no seed") {
        const SecurityPosture a(std::vector<double>{0.3, 0.3});
        const auto trace = host_app_cascade(j, a, std::vector<std::uint8_t>{0, 0}, 4);
        CHECK(trace.final_state().r == std::vector<std::uint8_t>{0, 0});
    }
}

TEST_CASE("tripartite_cascade degenerate reductions") {
    SUBCASE("zero B reduces to the host-app cascade") {
        const auto b = b_from_dense({{0, 0}, {0, 0}});
        const auto j = j_from_dense({{0, 0.5}, {0.5, 0}});
        const SecurityPosture a(std::vector<double>{0.3, 0.3});
        const auto combined = tripartite_cascade(b, j, a, std::vector<std::uint8_t>{1, 0}, 4);
        const auto host_only = host_app_cascade(j, a, std::vector<std::uint8_t>{1, 0}, 4);
        CHECK(combined.final_state().r == host_only.final_state().r);
    }
    SUBCASE("zero J and zero posture reduce to the user-host cascade") {
        const auto b = b_from_dense({{1, 1}, {1, 2}});
        const auto j = j_from_dense({{0, 0}, {0, 0}});
        const SecurityPosture a = SecurityPosture::zeros(2);
        const auto combined = tripartite_cascade(b, j, a, std::vector<std::uint8_t>{1, 0}, 4);
        const auto user_only = user_host_cascade(b, std::vector<std::uint8_t>{1, 0}, 4);
        CHECK(combined.final_state().r == user_only.final_state().r);
    }
    SUBCASE("B alone spreads when it clears the posture") {
        const auto b = b_from_dense({{0, 1}, {1, 0}});
        const auto j = j_from_dense({{0, 0}, {0, 0}});
        const SecurityPosture a(std::vector<double>{0.5, 0.5});
        const auto trace = tripartite_cascade(b, j, a, std::vector<std::uint8_t>{1, 0}, 4);
        CHECK(trace.final_state().r == std::vector<std::uint8_t>{1, 1});
    }
}

TEST_CASE("reachability_fraction") {
    CHECK(reachability_fraction({std::vector<std::uint8_t>{1, 1}, 0, true}) == 1.0);
    CHECK(reachability_fraction({std::vector<std::uint8_t>{1, 0, 0, 0}, 0, true}) == 0.25);
    CHECK(reachability_fraction({std::vector<std::uint8_t>{0, 0}, 0, true}) == 0.0);
}

TEST_CASE("cascade fixed point equals BFS reachability") {
    Rng rng(31);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t users = 1 + rng.bounded(12);
        const std::size_t hosts = 1 + rng.bounded(12);
        const auto g = test::random_graph(users, hosts, 0.25, rng);
        const auto b = induced_host_matrix(g);
        const auto seeds = test::random_seed_vector(hosts, 1 + rng.bounded(3), rng);
        const auto trace = user_host_cascade(b, seeds, static_cast<int>(hosts));
        const auto oracle = test::bfs_reachable(test::dense_gram_naive(g), seeds);
        CHECK(trace.final_state().r == oracle);
        CHECK(trace.converged());
        CHECK(trace.states.size() <= hosts + 1);
    }
}

TEST_CASE("accumulation form equals the recursion") {
    Rng rng(37);
    SUBCASE("user-host walks, exact for any instance") {
        for (int trial = 0; trial < 40; ++trial) {
            const std::size_t hosts = 1 + rng.bounded(8);
            const auto g = test::random_graph(1 + rng.bounded(8), hosts, 0.3, rng);
            const auto b = induced_host_matrix(g);
            const auto dense = test::dense_gram_naive(g);
            const auto seeds = test::random_seed_vector(hosts, 1, rng);
            const auto trace = user_host_cascade(b, seeds, 5);
            for (int t = 0; t < static_cast<int>(trace.states.size()); ++t) {
                CHECK(trace.states[t].r == test::accumulation_state(dense, seeds, t, {}));
            }
        }
    }
    SUBCASE("host-application walks, support regime") {
        // The printed equivalence identifies thresholded sums with gated
        // states; it is exact when H acts as a support indicator (zero
        // posture, arbitrary P) and when walk masses stay integral (binary
        // P, posture below one).
        for (int trial = 0; trial < 40; ++trial) {
            const std::size_t hosts = 2 + rng.bounded(7);
            auto index = test::make_index(1, hosts, 1 + rng.bounded(3));
            const auto flows = test::random_flows(index, 0.25, rng);
            const bool binary_p = trial % 2 == 0;
            CompromiseProbabilities p(flows.app_count(), hosts);
            for (std::uint32_t k = 0; k < flows.app_count(); ++k) {
                for (std::uint32_t j = 0; j < hosts; ++j) {
                    if (rng.unit() < 0.5) p.set(k, j, binary_p ? 1.0 : rng.unit_open());
                }
            }
            std::vector<double> levels(hosts, 0.0);
            if (binary_p) {
                for (auto& v : levels) v = rng.unit() * 0.999;
            }
            const SecurityPosture a(levels);
            const auto j_op = propagation_operator(flows, p);
            const auto dense = j_op.m.to_dense();
            const auto seeds = test::random_seed_vector(hosts, 1, rng);
            const auto trace = host_app_cascade(j_op, a, seeds, 5);
            for (int t = 0; t < static_cast<int>(trace.states.size()); ++t) {
                CHECK(trace.states[t].r ==
                      test::accumulation_state(dense, seeds, t, a.levels()));
            }
        }
    }
}

TEST_CASE("monotone states and hardening dominance") {
    Rng rng(41);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t hosts = 2 + rng.bounded(8);
        const auto g = test::random_graph(1 + rng.bounded(8), hosts, 0.25, rng);
        auto index = test::make_index(1, hosts, 2);
        const auto flows = test::random_flows(index, 0.2, rng);
        const auto p = test::random_probabilities(2, hosts, 0.5, rng);
        std::vector<double> levels(hosts);
        for (auto& v : levels) v = rng.unit();
        const SecurityPosture a(levels);
        const auto b = induced_host_matrix(g);
        const auto j = propagation_operator(flows, p);
        const auto seeds = test::random_seed_vector(hosts, 1, rng);

        const auto trace = tripartite_cascade(b, j, a, seeds, static_cast<int>(hosts));
        for (std::size_t t = 1; t < trace.states.size(); ++t) {
            for (std::size_t i = 0; i < hosts; ++i) {
                CHECK(trace.states[t].r[i] >= trace.states[t - 1].r[i]);
            }
        }

        // Raising any single hardening level never increases reachability.
        const auto host = static_cast<std::uint32_t>(rng.bounded(hosts));
        const double raised = levels[host] + (1.0 - levels[host]) * rng.unit();
        const auto harder = a.with_level(host, raised);
        const auto base = reachability_fraction(trace.final_state());
        const auto hardened = reachability_fraction(
            tripartite_cascade(b, j, harder, seeds, static_cast<int>(hosts)).final_state());
        CHECK(hardened <= base + 1e-15);
    }
}

TEST_SUITE_END();
