#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "latmove/entity_index.hpp"
#include "latmove/errors.hpp"
#include "latmove/sparse.hpp"

namespace latmove {

using Edge = std::pair<std::uint32_t, std::uint32_t>;       // (user, host)
using FlowTriple = std::array<std::uint32_t, 3>;            // (src host, app, dst host)

// Binary user-host access relation. Edges are deduplicated and kept sorted
// by (user, host); the matrix view is U x N.
class BipartiteAccessGraph {
public:
    BipartiteAccessGraph(std::shared_ptr<const EntityIndex> index, std::vector<Edge> edges);

    const EntityIndex& index() const noexcept { return *index_; }
    std::shared_ptr<const EntityIndex> index_ptr() const noexcept { return index_; }

    std::size_t user_count() const noexcept { return matrix_.rows(); }
    std::size_t host_count() const noexcept { return matrix_.cols(); }
    std::size_t edge_count() const noexcept { return edges_.size(); }

    const std::vector<Edge>& edges() const noexcept { return edges_; }
    bool has_edge(std::uint32_t user, std::uint32_t host) const;

    // Sparse binary matrix A_C of shape U x N.
    const CsrMatrix& matrix() const noexcept { return matrix_; }

    // Hosts accessible from one user, ascending.
    std::span<const std::uint32_t> hosts_of(std::uint32_t user) const {
        return matrix_.row_cols(user);
    }

private:
    std::shared_ptr<const EntityIndex> index_;
    std::vector<Edge> edges_;
    CsrMatrix matrix_;
};

// K sparse N x N binary relations A_k; triple (i, k, j) means host i talks
// to host j through application k. Self-loops are rejected.
class HostAppFlows {
public:
    HostAppFlows(std::shared_ptr<const EntityIndex> index, std::vector<FlowTriple> triples);

    const EntityIndex& index() const noexcept { return *index_; }
    std::shared_ptr<const EntityIndex> index_ptr() const noexcept { return index_; }

    std::size_t host_count() const noexcept { return host_count_; }
    std::size_t app_count() const noexcept { return per_app_.size(); }
    std::size_t triple_count() const noexcept { return triples_.size(); }

    const std::vector<FlowTriple>& triples() const noexcept { return triples_; }
    const CsrMatrix& app_matrix(std::uint32_t k) const { return per_app_.at(k); }

    // Sources i with a flow (i, k, j), ascending. Column slice of A_k.
    const std::vector<std::uint32_t>& sources_into(std::uint32_t k, std::uint32_t j) const {
        return in_sources_.at(k * host_count_ + j);
    }

private:
    std::shared_ptr<const EntityIndex> index_;
    std::size_t host_count_ = 0;
    std::vector<FlowTriple> triples_;              // sorted by (k, src, dst)
    std::vector<CsrMatrix> per_app_;               // A_k, N x N each
    std::vector<std::vector<std::uint32_t>> in_sources_;  // indexed k*N + j
};

// K x N matrix of per-(application, host) compromise probabilities.
class CompromiseProbabilities {
public:
    CompromiseProbabilities(std::size_t app_count, std::size_t host_count);
    CompromiseProbabilities(std::size_t app_count, std::size_t host_count,
                            std::vector<double> values);

    std::size_t app_count() const noexcept { return app_count_; }
    std::size_t host_count() const noexcept { return host_count_; }

    double at(std::uint32_t k, std::uint32_t j) const { return p_[k * host_count_ + j]; }
    void set(std::uint32_t k, std::uint32_t j, double value);

    std::size_t nonzero_count() const;

private:
    std::size_t app_count_ = 0;
    std::size_t host_count_ = 0;
    std::vector<double> p_;
};

// Per-host hardening levels in [0, 1].
class SecurityPosture {
public:
    explicit SecurityPosture(std::vector<double> levels);
    static SecurityPosture zeros(std::size_t host_count) {
        return SecurityPosture(std::vector<double>(host_count, 0.0));
    }

    std::size_t host_count() const noexcept { return a_.size(); }
    double at(std::uint32_t j) const { return a_[j]; }
    const std::vector<double>& levels() const noexcept { return a_; }
    SecurityPosture with_level(std::uint32_t j, double level) const;

private:
    std::vector<double> a_;
};

// B = A_C^T A_C. Entry (i, j) counts users with access to both hosts.
struct InducedHostMatrix {
    CsrMatrix m;
};

// J: entry (j, i) is the probability-weighted count of application channels
// from host i into host j. Stores a structural slot for every flow so the
// pattern is stable under hardening updates.
struct PropagationOperator {
    CsrMatrix m;
};

BipartiteAccessGraph build_user_host_graph(
    const std::vector<std::pair<std::string, std::string>>& edge_list,
    std::shared_ptr<const EntityIndex> index);

InducedHostMatrix induced_host_matrix(const BipartiteAccessGraph& g);

PropagationOperator propagation_operator(const HostAppFlows& flows,
                                         const CompromiseProbabilities& p);

// (user degrees, host degrees); row and column sums of A_C.
std::pair<std::vector<std::uint32_t>, std::vector<std::uint32_t>>
degree_vectors(const BipartiteAccessGraph& g);

} // namespace latmove
