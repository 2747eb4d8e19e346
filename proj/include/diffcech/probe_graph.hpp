/**
 * Finite reflexive graphs used as probes. Self-loops are implicit: every
 * vertex is adjacent to itself, and only edges between distinct vertices are
 * stored. Components are the connected components of the edge relation.
 */
#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "matrix.hpp"
#include "union_find.hpp"

namespace diffcech {

class ProbeGraph {
public:
    ProbeGraph() = default;

    ProbeGraph(std::vector<std::string> vertices, const std::vector<std::pair<std::string, std::string>>& edges)
        : vertices_(std::move(vertices)) {
        for (std::size_t i = 0; i < vertices_.size(); ++i)
            if (!index_.emplace(vertices_[i], static_cast<Index>(i)).second)
                throw MalformedInput("duplicate vertex '" + vertices_[i] + "'");
        std::vector<std::pair<Index, Index>> idx;
        for (const auto& [a, b] : edges) idx.emplace_back(index_of(a), index_of(b));
        init_edges(idx);
    }

    ProbeGraph(std::vector<std::string> vertices, const std::vector<std::pair<Index, Index>>& edges)
        : vertices_(std::move(vertices)) {
        for (std::size_t i = 0; i < vertices_.size(); ++i)
            if (!index_.emplace(vertices_[i], static_cast<Index>(i)).second)
                throw MalformedInput("duplicate vertex '" + vertices_[i] + "'");
        init_edges(edges);
    }

    std::size_t size() const { return vertices_.size(); }
    const std::vector<std::string>& vertices() const { return vertices_; }
    const std::string& name(Index v) const { return vertices_[v]; }
    const std::vector<std::pair<Index, Index>>& edges() const { return edges_; }
    const std::vector<Index>& neighbors(Index v) const { return adjacency_[v]; }

    bool contains(const std::string& v) const { return index_.count(v) != 0; }

    Index index_of(const std::string& v) const {
        auto it = index_.find(v);
        if (it == index_.end()) throw MalformedInput("unknown vertex '" + v + "'");
        return it->second;
    }

    /// True for equal vertices and for the endpoints of an edge.
    bool adjacent_or_equal(Index a, Index b) const {
        if (a == b) return true;
        const auto& n = adjacency_[a];
        return std::binary_search(n.begin(), n.end(), b);
    }

    Index component(Index v) const { return component_[v]; }
    const std::vector<Index>& components() const { return component_; }
    std::size_t component_count() const { return component_count_; }

    friend bool operator==(const ProbeGraph& a, const ProbeGraph& b) {
        return a.vertices_ == b.vertices_ && a.edges_ == b.edges_;
    }

private:
    void init_edges(const std::vector<std::pair<Index, Index>>& edges) {
        adjacency_.assign(vertices_.size(), {});
        for (auto [a, b] : edges) {
            if (a == b) throw MalformedInput("self-loop at vertex '" + vertices_[a] + "'");
            if (a > b) std::swap(a, b);
            edges_.emplace_back(a, b);
        }
        std::sort(edges_.begin(), edges_.end());
        edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
        UnionFind uf(vertices_.size());
        for (auto [a, b] : edges_) {
            adjacency_[a].push_back(b);
            adjacency_[b].push_back(a);
            uf.unite(a, b);
        }
        for (auto& n : adjacency_) std::sort(n.begin(), n.end());
        component_ = uf.labels(&component_count_);
    }

    std::vector<std::string> vertices_;
    std::map<std::string, Index> index_;
    std::vector<std::pair<Index, Index>> edges_;
    std::vector<std::vector<Index>> adjacency_;
    std::vector<Index> component_;
    std::size_t component_count_ = 0;
};

/// Edge-or-collapse check: every edge maps to an edge or to a single vertex.
inline bool is_graph_map(const ProbeGraph& from, const ProbeGraph& to, const std::vector<Index>& f) {
    if (f.size() != from.size()) return false;
    for (auto [a, b] : from.edges())
        if (!to.adjacent_or_equal(f[a], f[b])) return false;
    return true;
}

}  // namespace diffcech
