/**
 * Brute-force oracles that share no code path with the engine they check: Betti numbers of
 * a simplicial complex from ranks over prime fields, and bundle classes as orbits of the
 * gauge action on raw labellings of a presentation.
 */
#pragma once

#include <algorithm>
#include <array>
#include <set>
#include <vector>

#include "group.hpp"
#include "presentation.hpp"
#include "star_cover.hpp"

namespace diffcech::oracles {

/// Rank of a dense integer matrix over F_p by plain row reduction.
inline std::size_t rank_mod(std::vector<std::vector<long long>> m, long long p) {
    auto reduce = [p](long long v) { return ((v % p) + p) % p; };
    auto power = [p](long long b, long long e) {
        long long r = 1;
        for (; e > 0; e >>= 1, b = b * b % p)
            if (e & 1) r = r * b % p;
        return r;
    };
    const std::size_t cols = m.empty() ? 0 : m[0].size();
    std::size_t rank = 0;
    for (std::size_t c = 0; c < cols && rank < m.size(); ++c) {
        std::size_t pivot = rank;
        while (pivot < m.size() && reduce(m[pivot][c]) == 0) ++pivot;
        if (pivot == m.size()) continue;
        std::swap(m[pivot], m[rank]);
        const long long inv = power(reduce(m[rank][c]), p - 2);
        for (std::size_t r = 0; r < m.size(); ++r) {
            if (r == rank) continue;
            const long long f = reduce(m[r][c]) * inv % p;
            if (f == 0) continue;
            for (std::size_t j = 0; j < cols; ++j) m[r][j] = reduce(m[r][j] - f * m[rank][j]);
        }
        ++rank;
    }
    return rank;
}

struct SimplicialBetti {
    std::vector<std::size_t> betti;  // over Q, by dimension
    bool torsion_free = true;        // ranks mod 2 and mod 3 match the rational ranks
};

/// Betti numbers of the oriented simplicial chain complex.
inline SimplicialBetti simplicial_betti(const SimplicialComplex& k) {
    constexpr long long big_prime = 1000003;
    const std::size_t top = k.dimension();
    std::vector<std::vector<Index>> by_dim(top + 1);
    for (std::size_t d = 0; d <= top; ++d) by_dim[d] = k.simplices_of_dimension(d);
    std::vector<std::vector<std::vector<long long>>> boundary(top + 1);  // C_n -> C_{n-1}
    for (std::size_t n = 1; n <= top; ++n) {
        boundary[n].assign(by_dim[n - 1].size(), std::vector<long long>(by_dim[n].size(), 0));
        for (std::size_t s = 0; s < by_dim[n].size(); ++s)
            for (std::size_t i = 0; i <= n; ++i) {
                auto face = k.simplices()[by_dim[n][s]];
                face.erase(face.begin() + static_cast<long>(i));
                const Index f = *k.find(face);
                const auto row = std::find(by_dim[n - 1].begin(), by_dim[n - 1].end(), f) - by_dim[n - 1].begin();
                boundary[n][static_cast<std::size_t>(row)][s] += i % 2 == 0 ? 1 : -1;
            }
    }
    SimplicialBetti out;
    std::vector<std::size_t> rational(top + 2, 0);
    for (std::size_t n = 1; n <= top; ++n) {
        rational[n] = rank_mod(boundary[n], big_prime);
        for (long long p : {2LL, 3LL}) out.torsion_free = out.torsion_free && rank_mod(boundary[n], p) == rational[n];
    }
    for (std::size_t n = 0; n <= top; ++n) out.betti.push_back(by_dim[n].size() - rational[n] - rational[n + 1]);
    return out;
}

/// The boundary of a square, as a simplicial complex.
inline SimplicialComplex square_boundary() {
    return SimplicialComplex({"0", "1", "2", "3"}, {{0, 1}, {1, 2}, {2, 3}, {0, 3}});
}

/// Orbits of the gauge action on all labellings of the non-identity maps that satisfy the
/// composition law, counted by canonical forms. Written against the presentation directly.
inline std::size_t labelling_orbits(const PlotPresentation& p, const FiniteGroup& g) {
    struct Slot {
        Index map, comp;
    };
    std::vector<Slot> slots;
    std::vector<Index> comp_offset;
    std::size_t comps = 0;
    for (const auto& pr : p.probes()) {
        comp_offset.push_back(static_cast<Index>(comps));
        comps += pr.graph.component_count();
    }
    for (Index m = 0; m < p.maps().size(); ++m)
        if (p.identity(p.map(m).from) != m)
            for (Index c = 0; c < p.probe(p.map(m).from).graph.component_count(); ++c) slots.push_back({m, c});
    // Composition law instances as (hf, h, f) label positions; UINT32_MAX stands for an identity.
    auto position = [&](Index m, Index v) -> Index {
        if (p.identity(p.map(m).from) == m) return UINT32_MAX;
        Index c = p.probe(p.map(m).from).graph.component(v);
        for (Index s = 0; s < slots.size(); ++s)
            if (slots[s].map == m && slots[s].comp == c) return s;
        throw MalformedInput("missing slot");
    };
    std::vector<std::array<Index, 3>> laws;
    for (Index f = 0; f < p.maps().size(); ++f)
        for (Index h = 0; h < p.maps().size(); ++h) {
            if (p.map(h).from != p.map(f).to) continue;
            std::vector<Index> data;
            for (Index v : p.map(f).vertex_map) data.push_back(p.map(h).vertex_map[v]);
            Index hf = *p.find_map(p.map(f).from, p.map(h).to, data);
            for (Index v = 0; v < p.map(f).vertex_map.size(); ++v)
                laws.push_back({position(hf, v), position(h, p.map(f).vertex_map[v]), position(f, v)});
        }
    auto label = [&](const std::vector<Index>& x, Index s) { return s == UINT32_MAX ? g.unit() : x[s]; };
    auto valid = [&](const std::vector<Index>& x) {
        for (const auto& l : laws)
            if (label(x, l[0]) != g.mul(label(x, l[1]), label(x, l[2]))) return false;
        return true;
    };
    // Gauge components at the source and target of each slot.
    std::vector<std::pair<Index, Index>> ends;
    for (const auto& sl : slots) {
        const ProbeMap& pm = p.map(sl.map);
        const ProbeGraph& src = p.probe(pm.from).graph;
        Index v = 0;
        while (src.component(v) != sl.comp) ++v;
        ends.emplace_back(comp_offset[pm.from] + sl.comp,
                          comp_offset[pm.to] + p.probe(pm.to).graph.component(pm.vertex_map[v]));
    }
    std::size_t labellings = 1, gauges = 1;
    for (std::size_t s = 0; s < slots.size(); ++s) labellings *= g.order();
    for (std::size_t c = 0; c < comps; ++c) gauges *= g.order();
    auto digits = [&](std::size_t idx, std::size_t len) {
        std::vector<Index> d(len);
        for (std::size_t i = len; i-- > 0; idx /= g.order()) d[i] = static_cast<Index>(idx % g.order());
        return d;
    };
    std::set<std::vector<Index>> canonical;
    for (std::size_t t = 0; t < labellings; ++t) {
        auto x = digits(t, slots.size());
        if (!valid(x)) continue;
        std::vector<Index> best;
        for (std::size_t hi = 0; hi < gauges; ++hi) {
            auto h = digits(hi, comps);
            std::vector<Index> y(slots.size());
            for (Index s = 0; s < slots.size(); ++s)
                y[s] = g.mul(g.mul(h[ends[s].second], x[s]), g.inverse(h[ends[s].first]));
            if (best.empty() || y < best) best = y;
        }
        canonical.insert(best);
    }
    return canonical.size();
}

}  // namespace diffcech::oracles
