#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "latmove/errors.hpp"

namespace latmove {

enum class EntityKind { User, Host, App };

// Bijection between external string identifiers and dense indices for the
// three entity classes. Indices are assigned in first-seen order during
// ingestion; the index is immutable once built.
class EntityIndex {
public:
    std::size_t user_count() const noexcept { return users_.size(); }
    std::size_t host_count() const noexcept { return hosts_.size(); }
    std::size_t app_count() const noexcept { return apps_.size(); }

    std::uint32_t user_index(const std::string& id) const { return lookup(user_map_, id); }
    std::uint32_t host_index(const std::string& id) const { return lookup(host_map_, id); }
    std::uint32_t app_index(const std::string& id) const { return lookup(app_map_, id); }

    bool has_user(const std::string& id) const { return user_map_.count(id) != 0; }
    bool has_host(const std::string& id) const { return host_map_.count(id) != 0; }
    bool has_app(const std::string& id) const { return app_map_.count(id) != 0; }

    const std::string& user_id(std::uint32_t i) const { return users_.at(i); }
    const std::string& host_id(std::uint32_t j) const { return hosts_.at(j); }
    const std::string& app_id(std::uint32_t k) const { return apps_.at(k); }

    const std::vector<std::string>& users() const noexcept { return users_; }
    const std::vector<std::string>& hosts() const noexcept { return hosts_; }
    const std::vector<std::string>& apps() const noexcept { return apps_; }

private:
    friend class EntityIndexBuilder;

    static std::uint32_t lookup(const std::unordered_map<std::string, std::uint32_t>& map,
                                const std::string& id) {
        auto it = map.find(id);
        if (it == map.end()) throw UnknownIdentifierError(id);
        return it->second;
    }

    std::vector<std::string> users_, hosts_, apps_;
    std::unordered_map<std::string, std::uint32_t> user_map_, host_map_, app_map_;
};

class EntityIndexBuilder {
public:
    std::uint32_t intern_user(const std::string& id) { return intern(index_.users_, index_.user_map_, id); }
    std::uint32_t intern_host(const std::string& id) { return intern(index_.hosts_, index_.host_map_, id); }
    std::uint32_t intern_app(const std::string& id) { return intern(index_.apps_, index_.app_map_, id); }

    EntityIndex build() {
        if (index_.users_.empty() || index_.hosts_.empty() || index_.apps_.empty()) {
            throw ValidationError("entity index requires at least one user, host, and app");
        }
        return std::move(index_);
    }

    // Variant for datasets with no application dimension (user-host only
    // workflows); a placeholder app keeps U, N, K >= 1.
    EntityIndex build_allow_empty_apps() {
        if (index_.apps_.empty()) intern_app("_none");
        return build();
    }

private:
    static std::uint32_t intern(std::vector<std::string>& ids,
                                std::unordered_map<std::string, std::uint32_t>& map,
                                const std::string& id) {
        if (id.empty()) throw ValidationError("empty identifier");
        auto it = map.find(id);
        if (it != map.end()) return it->second;
        const auto idx = static_cast<std::uint32_t>(ids.size());
        ids.push_back(id);
        map.emplace(id, idx);
        return idx;
    }

    EntityIndex index_;
};

} // namespace latmove
