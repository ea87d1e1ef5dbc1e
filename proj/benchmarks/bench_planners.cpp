#include <benchmark/benchmark.h>

#include "latmove/hardening.hpp"
#include "latmove/segmentation.hpp"
#include "latmove/synthetic.hpp"

using namespace latmove;

namespace {

SyntheticSpec desk_spec() {
    SyntheticSpec spec;
    spec.seed = 42;
    return spec;
}

} // namespace

static void BM_GreedySegmentNoRecalc(benchmark::State& state) {
    auto [g, flows] = gen_synthetic_tripartite(desk_spec());
    const auto q = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        const auto plan = greedy_segment(g, q, false);
        benchmark::DoNotOptimize(plan.removed_edges.size());
    }
}
BENCHMARK(BM_GreedySegmentNoRecalc)->Arg(16)->Arg(128);

static void BM_GreedySegmentRecalc(benchmark::State& state) {
    auto [g, flows] = gen_synthetic_tripartite(desk_spec());
    const auto q = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        const auto plan = greedy_segment(g, q, true);
        benchmark::DoNotOptimize(plan.removed_edges.size());
    }
}
BENCHMARK(BM_GreedySegmentRecalc)->Arg(16);

static void BM_DegreeFirstSegment(benchmark::State& state) {
    auto [g, flows] = gen_synthetic_tripartite(desk_spec());
    const auto q = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        const auto plan = degree_first_segment(g, q, DegreeFirstMode::HostFirst);
        benchmark::DoNotOptimize(plan.removed_edges.size());
    }
}
BENCHMARK(BM_DegreeFirstSegment)->Arg(128);

static void BM_GreedyEdgeHarden(benchmark::State& state) {
    auto [g, flows] = gen_synthetic_tripartite(desk_spec());
    const auto p = gen_random_P(3, 450, 0.1, 42);
    const EpsilonMap eps;
    const auto eligible = eligible_edges(flows, p, eps);
    const auto eta = std::min<std::size_t>(eligible.size(), 32);
    const bool recalc = state.range(0) != 0;
    for (auto _ : state) {
        const auto plan = greedy_edge_harden(flows, p, eta, eps, recalc);
        benchmark::DoNotOptimize(plan.hardened_edges.size());
    }
}
BENCHMARK(BM_GreedyEdgeHarden)->Arg(0)->Arg(1);
