#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace latmove {

// Deterministic RNG for seeded generators and experiment trials.
//
// mt19937_64 output is pinned by the standard, and all derivations below
// avoid std::*_distribution (whose output is implementation-defined), so a
// fixed seed yields identical streams on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    // Independent stream `stream` of a master seed (fixed-stride splitting).
    static Rng split(std::uint64_t master, std::uint64_t stream) {
        return Rng(splitmix64(master + 0x9E3779B97F4A7C15ULL * (stream + 1)));
    }

    std::uint64_t next_u64() { return gen_(); }

    // Uniform in [0, n), unbiased via rejection.
    std::uint64_t bounded(std::uint64_t n) {
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
        std::uint64_t x;
        do {
            x = gen_();
        } while (x >= limit);
        return x % n;
    }

    // Uniform double strictly inside (0, 1): 53-bit mantissa, half-offset.
    double unit_open() { return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1p-53; }

    // Uniform double in [0, 1).
    double unit() { return static_cast<double>(gen_() >> 11) * 0x1p-53; }

    // k distinct values from [0, n), ascending. Partial Fisher-Yates on a
    // sparse index map so n can be large.
    std::vector<std::uint64_t> sample_without_replacement(std::uint64_t n, std::uint64_t k);

private:
    static std::uint64_t splitmix64(std::uint64_t x) {
        x += 0x9E3779B97F4A7C15ULL;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
        return x ^ (x >> 31);
    }

    std::mt19937_64 gen_;
};

} // namespace latmove
