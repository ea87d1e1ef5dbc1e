#include "latmove/rng.hpp"

#include <algorithm>
#include <unordered_map>

namespace latmove {

std::vector<std::uint64_t> Rng::sample_without_replacement(std::uint64_t n, std::uint64_t k) {
    std::unordered_map<std::uint64_t, std::uint64_t> moved;
    std::vector<std::uint64_t> out;
    out.reserve(k);
    for (std::uint64_t i = 0; i < k; ++i) {
        const std::uint64_t j = i + bounded(n - i);
        auto it_j = moved.find(j);
        const std::uint64_t value_j = (it_j == moved.end()) ? j : it_j->second;
        auto it_i = moved.find(i);
        const std::uint64_t value_i = (it_i == moved.end()) ? i : it_i->second;
        moved[j] = value_i;
        out.push_back(value_j);
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace latmove
