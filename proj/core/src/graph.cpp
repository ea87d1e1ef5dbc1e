#include "latmove/graph.hpp"

#include <algorithm>

namespace latmove {

BipartiteAccessGraph::BipartiteAccessGraph(std::shared_ptr<const EntityIndex> index,
                                           std::vector<Edge> edges)
    : index_(std::move(index)) {
    const std::size_t users = index_->user_count();
    const std::size_t hosts = index_->host_count();
    for (const auto& [i, j] : edges) {
        if (i >= users || j >= hosts) {
            throw ValidationError("access edge index out of range");
        }
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    edges_ = std::move(edges);

    std::vector<Triplet> triplets;
    triplets.reserve(edges_.size());
    for (const auto& [i, j] : edges_) {
        triplets.push_back({i, j, 1.0});
    }
    matrix_ = CsrMatrix::from_triplets(users, hosts, std::move(triplets));
}

bool BipartiteAccessGraph::has_edge(std::uint32_t user, std::uint32_t host) const {
    return std::binary_search(edges_.begin(), edges_.end(), Edge{user, host});
}

HostAppFlows::HostAppFlows(std::shared_ptr<const EntityIndex> index,
                           std::vector<FlowTriple> triples)
    : index_(std::move(index)), host_count_(index_->host_count()) {
    const std::size_t apps = index_->app_count();
    for (const auto& t : triples) {
        if (t[0] >= host_count_ || t[2] >= host_count_ || t[1] >= apps) {
            throw ValidationError("flow triple index out of range");
        }
        if (t[0] == t[2]) {
            throw ValidationError("self-loop flow rejected: host " + index_->host_id(t[0]) +
                                  " via app " + index_->app_id(t[1]));
        }
    }
    std::sort(triples.begin(), triples.end(),
              [](const FlowTriple& a, const FlowTriple& b) {
                  if (a[1] != b[1]) return a[1] < b[1];
                  if (a[0] != b[0]) return a[0] < b[0];
                  return a[2] < b[2];
              });
    triples.erase(std::unique(triples.begin(), triples.end()), triples.end());
    triples_ = std::move(triples);

    per_app_.reserve(apps);
    std::vector<std::vector<Triplet>> by_app(apps);
    for (const auto& t : triples_) {
        by_app[t[1]].push_back({t[0], t[2], 1.0});
    }
    for (std::size_t k = 0; k < apps; ++k) {
        per_app_.push_back(CsrMatrix::from_triplets(host_count_, host_count_, std::move(by_app[k])));
    }

    in_sources_.assign(apps * host_count_, {});
    for (const auto& t : triples_) {
        in_sources_[t[1] * host_count_ + t[2]].push_back(t[0]);
    }
    for (auto& v : in_sources_) std::sort(v.begin(), v.end());
}

CompromiseProbabilities::CompromiseProbabilities(std::size_t app_count, std::size_t host_count)
    : app_count_(app_count), host_count_(host_count), p_(app_count * host_count, 0.0) {}

CompromiseProbabilities::CompromiseProbabilities(std::size_t app_count, std::size_t host_count,
                                                 std::vector<double> values)
    : app_count_(app_count), host_count_(host_count), p_(std::move(values)) {
    if (p_.size() != app_count_ * host_count_) {
        throw ShapeMismatchError("compromise probability matrix has wrong size");
    }
    for (double v : p_) {
        if (!(v >= 0.0 && v <= 1.0)) {
            throw ValidationError("compromise probability outside [0, 1]");
        }
    }
}

void CompromiseProbabilities::set(std::uint32_t k, std::uint32_t j, double value) {
    if (!(value >= 0.0 && value <= 1.0)) {
        throw ValidationError("compromise probability outside [0, 1]");
    }
    p_[k * host_count_ + j] = value;
}

std::size_t CompromiseProbabilities::nonzero_count() const {
    std::size_t n = 0;
    for (double v : p_) {
        if (v != 0.0) ++n;
    }
    return n;
}

SecurityPosture::SecurityPosture(std::vector<double> levels) : a_(std::move(levels)) {
    for (double v : a_) {
        if (!(v >= 0.0 && v <= 1.0)) {
            throw ValidationError("hardening level outside [0, 1]");
        }
    }
}

SecurityPosture SecurityPosture::with_level(std::uint32_t j, double level) const {
    auto copy = a_;
    copy.at(j) = level;
    return SecurityPosture(std::move(copy));
}

BipartiteAccessGraph build_user_host_graph(
    const std::vector<std::pair<std::string, std::string>>& edge_list,
    std::shared_ptr<const EntityIndex> index) {
    std::vector<Edge> edges;
    edges.reserve(edge_list.size());
    for (const auto& [user, host] : edge_list) {
        edges.emplace_back(index->user_index(user), index->host_index(host));
    }
    return BipartiteAccessGraph(std::move(index), std::move(edges));
}

InducedHostMatrix induced_host_matrix(const BipartiteAccessGraph& g) {
    // B = A_C^T A_C, accumulated user by user: each user contributes the
    // outer product of its host indicator with itself.
    std::vector<Triplet> triplets;
    for (std::uint32_t i = 0; i < g.user_count(); ++i) {
        const auto hosts = g.hosts_of(i);
        for (std::uint32_t a : hosts) {
            for (std::uint32_t b : hosts) {
                triplets.push_back({a, b, 1.0});
            }
        }
    }
    return {CsrMatrix::from_triplets(g.host_count(), g.host_count(), std::move(triplets))};
}

PropagationOperator propagation_operator(const HostAppFlows& flows,
                                         const CompromiseProbabilities& p) {
    if (p.app_count() != flows.app_count() || p.host_count() != flows.host_count()) {
        throw ShapeMismatchError("probability matrix shape does not match flows");
    }
    // [J]_{ji} = sum_k [A_k]_{ij} [P]_{kj}; built directly from the triples,
    // never via the KN-dimensional Kronecker factors.
    std::vector<Triplet> triplets;
    triplets.reserve(flows.triple_count());
    for (const auto& t : flows.triples()) {
        triplets.push_back({t[2], t[0], p.at(t[1], t[2])});
    }
    const std::size_t n = flows.host_count();
    return {CsrMatrix::from_triplets(n, n, std::move(triplets), /*keep_zeros=*/true)};
}

std::pair<std::vector<std::uint32_t>, std::vector<std::uint32_t>>
degree_vectors(const BipartiteAccessGraph& g) {
    std::vector<std::uint32_t> du(g.user_count(), 0), dn(g.host_count(), 0);
    for (const auto& [i, j] : g.edges()) {
        du[i] += 1;
        dn[j] += 1;
    }
    return {std::move(du), std::move(dn)};
}

} // namespace latmove
