#pragma once

#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include "latmove/graph.hpp"

namespace latmove {

enum class DegreeModel { Uniform, PowerLaw };

// Parameters of the synthetic tripartite surrogate. Defaults scale the
// enterprise shape down to desk size with power-law host degrees so hub
// hosts exist.
struct SyntheticSpec {
    std::size_t users = 600;
    std::size_t hosts = 450;
    std::size_t apps = 3;
    std::size_t user_host_edges = 850;
    std::size_t flows = 630;
    std::uint64_t seed = 0;
    DegreeModel degree_model = DegreeModel::PowerLaw;
    // Host degrees are heavier-tailed than user degrees: hub hosts glue the
    // access graph while only a thin tail of mega-users exists.
    double exponent = 2.5;
    double user_exponent = 3.5;
};

// Deterministic tripartite instance with exactly the requested edge and
// flow counts (sampled without replacement).
std::pair<BipartiteAccessGraph, HostAppFlows> gen_synthetic_tripartite(const SyntheticSpec& spec);

// Exactly round(fraction * K * N) nonzero entries, each uniform in (0, 1).
CompromiseProbabilities gen_random_P(std::size_t app_count, std::size_t host_count,
                                     double nonzero_fraction, std::uint64_t seed);

// Binary seed vector with exactly `count` ones, uniform without replacement.
std::vector<std::uint8_t> pick_initial_compromise(std::size_t host_count, std::size_t count,
                                                  std::uint64_t seed);

// Posture with i.i.d. uniform [0, 1) levels.
SecurityPosture gen_random_posture(std::size_t host_count, std::uint64_t seed);

} // namespace latmove
