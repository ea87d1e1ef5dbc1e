#include <benchmark/benchmark.h>

#include "latmove/reachability.hpp"
#include "latmove/synthetic.hpp"

using namespace latmove;

namespace {

struct Fixture {
    BipartiteAccessGraph g;
    HostAppFlows flows;
    CompromiseProbabilities p;
    SecurityPosture a;
    InducedHostMatrix b;
    PropagationOperator j;
    std::vector<std::uint8_t> r0;
};

Fixture make_fixture(std::size_t scale) {
    SyntheticSpec spec;
    spec.users = 600 * scale;
    spec.hosts = 450 * scale;
    spec.apps = 3;
    spec.user_host_edges = 850 * scale;
    spec.flows = 630 * scale;
    spec.seed = 42;
    auto [g, flows] = gen_synthetic_tripartite(spec);
    auto p = gen_random_P(spec.apps, spec.hosts, 0.1, 42);
    auto a = gen_random_posture(spec.hosts, 42);
    auto b = induced_host_matrix(g);
    auto j = propagation_operator(flows, p);
    auto r0 = pick_initial_compromise(spec.hosts, std::max<std::size_t>(1, spec.hosts / 1000), 42);
    return {std::move(g), std::move(flows), std::move(p), std::move(a),
            std::move(b),  std::move(j),    std::move(r0)};
}

} // namespace

static void BM_TripartiteCascade(benchmark::State& state) {
    const auto fx = make_fixture(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        const auto trace = tripartite_cascade(fx.b, fx.j, fx.a, fx.r0,
                                              static_cast<int>(fx.g.host_count()));
        benchmark::DoNotOptimize(trace.final_state().r.data());
    }
}
BENCHMARK(BM_TripartiteCascade)->Arg(1)->Arg(4);

static void BM_UserHostCascade(benchmark::State& state) {
    const auto fx = make_fixture(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        const auto trace =
            user_host_cascade(fx.b, fx.r0, static_cast<int>(fx.g.host_count()));
        benchmark::DoNotOptimize(trace.final_state().r.data());
    }
}
BENCHMARK(BM_UserHostCascade)->Arg(1)->Arg(4);

static void BM_InducedHostMatrix(benchmark::State& state) {
    const auto fx = make_fixture(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        const auto b = induced_host_matrix(fx.g);
        benchmark::DoNotOptimize(b.m.nnz());
    }
}
BENCHMARK(BM_InducedHostMatrix)->Arg(1)->Arg(4);

BENCHMARK_MAIN();
