/**
 * Seeded random inputs for the property suites: integer matrices, bounded free
 * complexes, truncated simplicial sets and small plot presentations.
 */
#pragma once

#include <random>
#include <set>
#include <string>
#include <vector>

#include "category.hpp"
#include "complex.hpp"
#include "presentation.hpp"

namespace diffcech::random {

inline IntMatrix matrix(std::mt19937_64& rng, std::size_t r, std::size_t c, int bound) {
    std::uniform_int_distribution<int> val(-bound, bound);
    IntMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m.push_back_entry(i, j, val(rng));
    return m;
}

/// Bounded free complex in degrees 0..top: ∂_n = (basis of ker ∂_{n-1}) * random.
inline ChainComplex complex(std::mt19937_64& rng, int top) {
    std::uniform_int_distribution<int> rank(0, 3), val(-5, 5);
    std::vector<std::size_t> ranks;
    for (int n = 0; n <= top; ++n) ranks.push_back(rank(rng));
    std::vector<IntMatrix> maps;
    IntMatrix prev_kernel = IntMatrix::identity(ranks[0]);
    for (int n = 1; n <= top; ++n) {
        IntMatrix r(prev_kernel.cols(), ranks[n]);
        for (std::size_t i = 0; i < r.rows(); ++i)
            for (std::size_t j = 0; j < r.cols(); ++j) r.push_back_entry(i, j, val(rng));
        IntMatrix d = prev_kernel * r;
        prev_kernel = kernel_basis(d);
        maps.push_back(std::move(d));
    }
    ChainComplex c(0, ranks, maps);
    c.verify();
    return c;
}

/// Nerve of a random preorder on one to four objects; every simplex is its own component.
inline TruncatedSimplicialSet simplicial_set(std::mt19937_64& rng, std::size_t n_max) {
    std::uniform_int_distribution<int> objects(1, 4);
    std::bernoulli_distribution coin(0.4);
    std::size_t n = objects(rng);
    std::vector<std::vector<char>> le(n, std::vector<char>(n, 0));
    for (std::size_t a = 0; a < n; ++a) le[a][a] = 1;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            if (a != b && coin(rng)) le[a][b] = 1;
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b)
                if (le[a][k] && le[k][b]) le[a][b] = 1;
    std::vector<std::string> objs;
    std::vector<FinCategory::Arrow> arrows;
    std::vector<std::vector<Index>> arrow_of(n, std::vector<Index>(n, UINT32_MAX));
    for (Index a = 0; a < n; ++a) objs.push_back(std::to_string(a));
    for (Index a = 0; a < n; ++a)
        for (Index b = 0; b < n; ++b)
            if (le[a][b]) {
                arrow_of[a][b] = static_cast<Index>(arrows.size());
                arrows.push_back({objs[a] + "<" + objs[b], a, b});
            }
    std::vector<Index> ids;
    for (Index a = 0; a < n; ++a) ids.push_back(arrow_of[a][a]);
    auto arr = arrows;
    auto table = arrow_of;
    FinCategory c(objs, arrows, ids, [arr, table](Index g, Index f) { return table[arr[f].source][arr[g].target]; });
    auto x = nerve(c, n_max);
    for (std::size_t k = 0; k <= n_max; ++k) {
        std::vector<Index> comp(x.count(k));
        for (Index s = 0; s < x.count(k); ++s) comp[s] = s;
        x.set_components(k, comp, x.count(k));
    }
    return x;
}

/// A valid presentation with at most `max_probes` probes of one to three vertices over up to
/// four points, and at most `max_maps` non-identity maps after closure.
inline PlotPresentation presentation(std::mt19937_64& rng, std::size_t max_probes = 5, std::size_t max_maps = 8) {
    std::uniform_int_distribution<std::size_t> probe_count(1, max_probes), vertex_count(1, 3), point(0, 3),
        attempts(0, 2 * max_probes);
    std::bernoulli_distribution coin(0.5);
    while (true) {
        std::vector<Probe> probes;
        std::set<Index> used;
        const std::size_t np = probe_count(rng);
        for (std::size_t p = 0; p < np; ++p) {
            const std::size_t nv = vertex_count(rng);
            std::vector<std::string> names;
            std::vector<Index> labels;
            for (std::size_t v = 0; v < nv; ++v) {
                names.push_back("v" + std::to_string(v));
                labels.push_back(static_cast<Index>(point(rng)));
                used.insert(labels.back());
            }
            std::vector<std::pair<Index, Index>> edges;
            for (Index a = 0; a < nv; ++a)
                for (Index b = a + 1; b < nv; ++b)
                    if (coin(rng)) edges.emplace_back(a, b);
            probes.push_back({"P" + std::to_string(p), ProbeGraph(names, edges), labels});
        }
        // Points are the labels actually used, renumbered in order.
        std::vector<Index> renumber(4, UINT32_MAX);
        std::vector<std::string> points;
        for (Index x : used) {
            renumber[x] = static_cast<Index>(points.size());
            points.push_back("x" + std::to_string(x));
        }
        for (auto& pr : probes)
            for (auto& l : pr.to_space) l = renumber[l];

        std::vector<ProbeMap> maps;
        std::uniform_int_distribution<Index> pick(0, static_cast<Index>(np - 1));
        for (std::size_t t = attempts(rng); t-- > 0;) {
            Index from = pick(rng), to = pick(rng);
            if (from == to) continue;
            const Probe& a = probes[from];
            const Probe& b = probes[to];
            std::vector<Index> f;
            for (Index v = 0; v < a.graph.size(); ++v) {
                std::vector<Index> over;
                for (Index w = 0; w < b.graph.size(); ++w)
                    if (b.to_space[w] == a.to_space[v]) over.push_back(w);
                if (over.empty()) break;
                f.push_back(over[std::uniform_int_distribution<std::size_t>(0, over.size() - 1)(rng)]);
            }
            if (f.size() != a.graph.size() || !is_graph_map(a.graph, b.graph, f)) continue;
            bool duplicate = false;
            for (const auto& m : maps) duplicate = duplicate || (m.from == from && m.to == to && m.vertex_map == f);
            if (duplicate) continue;
            maps.push_back({"f" + std::to_string(maps.size()), from, to, f, false});
        }
        try {
            PlotPresentation p(points, probes, maps, np + max_maps);
            if (p.maps().size() <= np + max_maps) return p;
        } catch (const ResourceLimit&) {
        }
    }
}

}  // namespace diffcech::random
