/**
 * Presentations built from finite abstract simplicial complexes.
 *
 * X is the vertex set of the barycentric subdivision sd K (one point per
 * simplex of K). Each simplex σ contributes the probe st(σ): the open star of
 * σ, whose points are the barycenters of the simplices τ ⊇ σ and whose edges
 * are the edges of sd K between them. Open stars of vertices cover X, any
 * nonempty intersection of them is again an open star, and st(σ) ⊆ st(σ')
 * exactly when σ' ⊆ σ, so the inclusions reproduce the nerve of the vertex
 * star cover. Every probe is a cone on the barycenter of σ, hence connected.
 */
#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "presentation.hpp"

namespace diffcech {

class SimplicialComplex {
public:
    SimplicialComplex() = default;

    /// Closes the given facets under taking faces. Vertex names must be unique.
    SimplicialComplex(std::vector<std::string> vertices, const std::vector<std::vector<Index>>& facets)
        : vertices_(std::move(vertices)) {
        std::set<std::vector<Index>> all;
        for (auto f : facets) {
            if (f.empty()) throw MalformedInput("simplicial complex: empty facet");
            std::sort(f.begin(), f.end());
            if (std::adjacent_find(f.begin(), f.end()) != f.end())
                throw MalformedInput("simplicial complex: repeated vertex in a facet");
            if (f.back() >= vertices_.size()) throw MalformedInput("simplicial complex: vertex out of range");
            if (f.size() > 20) throw MalformedInput("simplicial complex: facet dimension too large");
            const std::size_t n = f.size();
            for (std::size_t mask = 1; mask < (std::size_t(1) << n); ++mask) {
                std::vector<Index> face;
                for (std::size_t i = 0; i < n; ++i)
                    if (mask >> i & 1) face.push_back(f[i]);
                all.insert(std::move(face));
            }
        }
        for (Index v = 0; v < vertices_.size(); ++v) all.insert({v});
        simplices_.assign(all.begin(), all.end());
        std::stable_sort(simplices_.begin(), simplices_.end(),
                         [](const auto& a, const auto& b) { return a.size() < b.size(); });
        for (Index s = 0; s < simplices_.size(); ++s) index_.emplace(simplices_[s], s);
    }

    const std::vector<std::string>& vertices() const { return vertices_; }
    /// All simplices, ordered by dimension and then lexicographically.
    const std::vector<std::vector<Index>>& simplices() const { return simplices_; }

    std::size_t dimension() const { return simplices_.empty() ? 0 : simplices_.back().size() - 1; }

    std::vector<Index> simplices_of_dimension(std::size_t d) const {
        std::vector<Index> out;
        for (Index s = 0; s < simplices_.size(); ++s)
            if (simplices_[s].size() == d + 1) out.push_back(s);
        return out;
    }

    std::optional<Index> find(const std::vector<Index>& simplex) const {
        auto it = index_.find(simplex);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    std::string name(Index s) const {
        std::string out = "{";
        for (std::size_t i = 0; i < simplices_[s].size(); ++i) out += (i ? "," : "") + vertices_[simplices_[s][i]];
        return out + "}";
    }

    /// True when every vertex of `a` is a vertex of `b`.
    bool is_face(Index a, Index b) const {
        return std::includes(simplices_[b].begin(), simplices_[b].end(), simplices_[a].begin(), simplices_[a].end());
    }

private:
    std::vector<std::string> vertices_;
    std::vector<std::vector<Index>> simplices_;
    std::map<std::vector<Index>, Index> index_;
};

inline SimplicialComplex octahedron_boundary() {
    // Poles n, s over the equator 0-1-2-3.
    std::vector<std::vector<Index>> facets;
    for (Index pole : {4u, 5u})
        for (Index i = 0; i < 4; ++i) facets.push_back({i, (i + 1) % 4, pole});
    return SimplicialComplex({"0", "1", "2", "3", "n", "s"}, facets);
}

inline PlotPresentation build_presentation_from_complex(const SimplicialComplex& k) {
    const auto& simp = k.simplices();
    if (simp.empty()) throw MalformedInput("cannot build a presentation from an empty complex");
    std::vector<std::string> points;
    for (Index s = 0; s < simp.size(); ++s) points.push_back(k.name(s));

    std::vector<Probe> probes;
    std::vector<std::vector<Index>> members(simp.size());  // simplices τ ⊇ σ, in point order
    for (Index s = 0; s < simp.size(); ++s) {
        for (Index t = 0; t < simp.size(); ++t)
            if (k.is_face(s, t)) members[s].push_back(t);
        std::vector<std::string> names;
        std::vector<std::pair<Index, Index>> edges;
        for (Index t : members[s]) names.push_back(points[t]);
        for (Index a = 0; a < members[s].size(); ++a)
            for (Index b = a + 1; b < members[s].size(); ++b)
                if (k.is_face(members[s][a], members[s][b]) || k.is_face(members[s][b], members[s][a]))
                    edges.emplace_back(a, b);
        probes.push_back({"st" + points[s], ProbeGraph(std::move(names), edges), members[s]});
    }

    std::vector<ProbeMap> maps;
    for (Index s = 0; s < simp.size(); ++s)
        for (Index f = 0; f < simp.size(); ++f) {
            if (f == s || !k.is_face(f, s)) continue;
            // st(s) ⊆ st(f): send each barycenter to itself.
            std::vector<Index> vm;
            const auto& target = members[f];
            for (Index t : members[s])
                vm.push_back(static_cast<Index>(std::lower_bound(target.begin(), target.end(), t) - target.begin()));
            maps.push_back({"st" + points[s] + "⊂st" + points[f], s, f, std::move(vm), false});
        }
    return PlotPresentation(std::move(points), std::move(probes), std::move(maps));
}

}  // namespace diffcech
