#include "latmove/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "latmove/errors.hpp"
#include "latmove/rng.hpp"

namespace latmove {

namespace {

std::string padded_name(const char* prefix, std::size_t i, std::size_t total) {
    std::size_t width = 1;
    for (std::size_t x = total > 0 ? total - 1 : 0; x >= 10; x /= 10) ++width;
    std::string digits = std::to_string(i);
    return std::string(prefix) + std::string(width - digits.size(), '0') + digits;
}

// Entity sampling weights. Power-law weights follow a Pareto inverse
// transform so a few entities become hubs; enterprise access counts are
// heavy-tailed on both the user and the host side.
std::vector<double> pareto_weights(std::size_t count, double exponent, Rng& rng) {
    if (exponent <= 1.0) throw ValidationError("power-law exponent must exceed 1");
    std::vector<double> w(count);
    for (auto& x : w) x = std::pow(rng.unit_open(), -1.0 / (exponent - 1.0));
    return w;
}

std::uint32_t weighted_pick(const std::vector<double>& cumulative, double total, Rng& rng) {
    const double x = rng.unit() * total;
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), x);
    const auto idx = static_cast<std::size_t>(it - cumulative.begin());
    return static_cast<std::uint32_t>(std::min(idx, cumulative.size() - 1));
}

} // namespace

std::pair<BipartiteAccessGraph, HostAppFlows> gen_synthetic_tripartite(const SyntheticSpec& spec) {
    if (spec.users < 1 || spec.hosts < 1 || spec.apps < 1) {
        throw ValidationError("synthetic spec requires positive entity counts");
    }
    if (spec.user_host_edges > spec.users * spec.hosts) {
        throw ValidationError("requested access edge count exceeds U*N");
    }
    if (spec.flows > spec.hosts * (spec.hosts - 1) * spec.apps) {
        throw ValidationError("requested flow count exceeds N*(N-1)*K");
    }

    EntityIndexBuilder builder;
    for (std::size_t i = 0; i < spec.users; ++i) builder.intern_user(padded_name("u", i, spec.users));
    for (std::size_t j = 0; j < spec.hosts; ++j) builder.intern_host(padded_name("h", j, spec.hosts));
    for (std::size_t k = 0; k < spec.apps; ++k) builder.intern_app(padded_name("app", k, spec.apps));
    auto index = std::make_shared<const EntityIndex>(builder.build());

    Rng rng = Rng::split(spec.seed, 0x5EED);
    const bool power_law = spec.degree_model == DegreeModel::PowerLaw;
    const auto host_w = power_law ? pareto_weights(spec.hosts, spec.exponent, rng)
                                  : std::vector<double>(spec.hosts, 1.0);
    const auto user_w = power_law ? pareto_weights(spec.users, spec.user_exponent, rng)
                                  : std::vector<double>(spec.users, 1.0);

    auto cumulate = [](const std::vector<double>& w) {
        std::vector<double> c(w.size());
        double total = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i) {
            total += w[i];
            c[i] = total;
        }
        return std::pair{std::move(c), total};
    };
    const auto [host_cum, host_total] = cumulate(host_w);
    const auto [user_cum, user_total] = cumulate(user_w);

    std::set<Edge> edges;
    while (edges.size() < spec.user_host_edges) {
        const auto user = weighted_pick(user_cum, user_total, rng);
        const auto host = weighted_pick(host_cum, host_total, rng);
        edges.insert({user, host});
    }

    std::set<FlowTriple> triples;
    while (triples.size() < spec.flows) {
        const auto src = static_cast<std::uint32_t>(rng.bounded(spec.hosts));
        const auto dst = weighted_pick(host_cum, host_total, rng);
        if (src == dst) continue;
        const auto app = static_cast<std::uint32_t>(rng.bounded(spec.apps));
        triples.insert({src, app, dst});
    }

    BipartiteAccessGraph graph(index, std::vector<Edge>(edges.begin(), edges.end()));
    HostAppFlows flows(index, std::vector<FlowTriple>(triples.begin(), triples.end()));
    return {std::move(graph), std::move(flows)};
}

CompromiseProbabilities gen_random_P(std::size_t app_count, std::size_t host_count,
                                     double nonzero_fraction, std::uint64_t seed) {
    if (!(nonzero_fraction >= 0.0 && nonzero_fraction <= 1.0)) {
        throw ValidationError("nonzero fraction must lie in [0, 1]");
    }
    const std::size_t cells = app_count * host_count;
    const auto nonzeros =
        static_cast<std::size_t>(std::llround(nonzero_fraction * static_cast<double>(cells)));
    Rng rng = Rng::split(seed, 0x9);
    const auto positions = rng.sample_without_replacement(cells, nonzeros);
    CompromiseProbabilities p(app_count, host_count);
    for (const auto pos : positions) {
        p.set(static_cast<std::uint32_t>(pos / host_count),
              static_cast<std::uint32_t>(pos % host_count), rng.unit_open());
    }
    return p;
}

std::vector<std::uint8_t> pick_initial_compromise(std::size_t host_count, std::size_t count,
                                                  std::uint64_t seed) {
    if (count < 1 || count > host_count) {
        throw ValidationError("initial compromise count out of range");
    }
    Rng rng = Rng::split(seed, 0xC);
    const auto picks = rng.sample_without_replacement(host_count, count);
    std::vector<std::uint8_t> r0(host_count, 0);
    for (const auto j : picks) r0[j] = 1;
    return r0;
}

SecurityPosture gen_random_posture(std::size_t host_count, std::uint64_t seed) {
    Rng rng = Rng::split(seed, 0xA);
    std::vector<double> levels(host_count);
    for (auto& v : levels) v = rng.unit();
    return SecurityPosture(std::move(levels));
}

} // namespace latmove
