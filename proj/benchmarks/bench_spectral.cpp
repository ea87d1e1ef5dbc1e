#include <benchmark/benchmark.h>

#include "latmove/spectral.hpp"
#include "latmove/synthetic.hpp"

using namespace latmove;

static void BM_LeadingEigenpairB(benchmark::State& state) {
    SyntheticSpec spec;
    spec.users = 600 * state.range(0);
    spec.hosts = 450 * state.range(0);
    spec.user_host_edges = 850 * state.range(0);
    spec.flows = 630 * state.range(0);
    spec.seed = 42;
    auto [g, flows] = gen_synthetic_tripartite(spec);
    const auto b = induced_host_matrix(g);
    for (auto _ : state) {
        const auto eig = leading_eigenpair_symmetric(b);
        benchmark::DoNotOptimize(eig.value);
    }
}
BENCHMARK(BM_LeadingEigenpairB)->Arg(1)->Arg(4);

static void BM_LeadingEigenpairJ(benchmark::State& state) {
    SyntheticSpec spec;
    spec.users = 600 * state.range(0);
    spec.hosts = 450 * state.range(0);
    spec.user_host_edges = 850 * state.range(0);
    spec.flows = 630 * state.range(0);
    spec.seed = 42;
    auto [g, flows] = gen_synthetic_tripartite(spec);
    const auto p = gen_random_P(spec.apps, spec.hosts, 0.1, 42);
    const auto j = propagation_operator(flows, p);
    for (auto _ : state) {
        const auto eig = leading_eigenpair_nonnegative(j);
        benchmark::DoNotOptimize(eig.value);
    }
}
BENCHMARK(BM_LeadingEigenpairJ)->Arg(1)->Arg(4);
