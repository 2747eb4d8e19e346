/**
 * Constructions on a plot presentation P of X:
 *
 *   nebula            B = ⊔ probes, with the projection pi : B -> X
 *   q_resolution      QX_k = ⊔ over k-chains U_0 -> ... -> U_k of probes, of U_0
 *   gauge_monoid      M = label-preserving graph endomorphisms of B
 *   bar_construction  (B//M)_k = B × M^k, M discrete
 *   cech_of_nebula    the Čech nerve of pi
 *
 * Chains list their maps in the order they are applied: a QX_k simplex is
 * (v; f_1, ..., f_k) with v a vertex of source(f_1). Then d_0 applies f_1 to v,
 * d_i (0 < i < k) replaces f_i, f_{i+1} by f_{i+1} ∘ f_i, d_k drops f_k, and
 * s_i inserts an identity after f_i. B//M uses the same shape with gauge
 * elements in place of probe maps.
 */
#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "category.hpp"
#include "cech.hpp"
#include "presentation.hpp"
#include "simplicial_set.hpp"

namespace diffcech {

struct Nebula {
    ProbeGraph graph;              // vertices named "probe:vertex"
    std::vector<Index> pi;         // point of X under each vertex
    std::vector<Index> probe_of;   // probe containing each vertex
    std::vector<Index> offset;     // first vertex of each probe, plus the total
    std::size_t x_size = 0;

    Index vertex(Index probe, Index v) const { return offset[probe] + v; }
};

inline Nebula nebula(const PlotPresentation& p) {
    Nebula n;
    n.x_size = p.points().size();
    std::vector<std::string> names;
    std::vector<std::pair<Index, Index>> edges;
    for (Index q = 0; q < p.probes().size(); ++q) {
        const Probe& pr = p.probe(q);
        Index base = static_cast<Index>(names.size());
        n.offset.push_back(base);
        for (Index v = 0; v < pr.graph.size(); ++v) {
            names.push_back(pr.id + ":" + pr.graph.name(v));
            n.pi.push_back(pr.to_space[v]);
            n.probe_of.push_back(q);
        }
        for (auto [a, b] : pr.graph.edges()) edges.emplace_back(base + a, base + b);
    }
    n.offset.push_back(static_cast<Index>(names.size()));
    n.graph = ProbeGraph(std::move(names), edges);
    return n;
}

// ---- QX ----------------------------------------------------------------------

struct QResolution {
    TruncatedSimplicialSet object;
    std::vector<std::vector<Index>> augmentation;  // point of X under each simplex, per degree
};

inline QResolution q_resolution(const PlotPresentation& p, std::size_t n_max, std::size_t cap = 10000000) {
    auto chains = std::make_shared<ChainIndex>(p.category(), n_max, cap);
    auto pres = std::make_shared<const PlotPresentation>(p);
    // Simplex (x, v) sits at offset[k][x] + v, where v runs over the source probe of chain x.
    auto offsets = std::make_shared<std::vector<std::vector<std::size_t>>>(n_max + 1);
    QResolution out{TruncatedSimplicialSet(n_max), std::vector<std::vector<Index>>(n_max + 1)};
    auto& q = out.object;
    for (std::size_t k = 0; k <= n_max; ++k) {
        auto& off = (*offsets)[k];
        const std::size_t chains_k = chains->count(k);
        off.resize(chains_k + 1);
        std::size_t total = 0, comps = 0;
        for (Index x = 0; x < chains_k; ++x) {
            off[x] = total;
            total += p.probe(chains->vertex(k, x, 0)).graph.size();
            if (total > cap)
                throw ResourceLimit("QX degree " + std::to_string(k) + " exceeds " + std::to_string(cap) + " simplices");
        }
        off[chains_k] = total;
        q.set_count(k, total);
        std::vector<Index> labels(total);
        auto& aug = out.augmentation[k];
        aug.resize(total);
        for (Index x = 0; x < chains_k; ++x) {
            const Probe& src = p.probe(chains->vertex(k, x, 0));
            for (Index v = 0; v < src.graph.size(); ++v) {
                labels[off[x] + v] = static_cast<Index>(comps + src.graph.component(v));
                aug[off[x] + v] = src.to_space[v];
            }
            comps += src.graph.component_count();
        }
        q.set_components(k, std::move(labels), comps);
    }
    for (std::size_t k = 0; k <= n_max; ++k) {
        const auto& off = (*offsets)[k];
        for (std::size_t i = 0; k > 0 && i <= k; ++i) {
            auto& f = q.face_map(k, i);
            f.resize(q.count(k));
            const auto& lower = (*offsets)[k - 1];
            for (Index x = 0; x < chains->count(k); ++x) {
                Index y = chains->face(k, x, i);
                const auto* vm = i == 0 ? &p.map(chains->arrow(k, x, 0)).vertex_map : nullptr;
                for (std::size_t v = 0; v < off[x + 1] - off[x]; ++v)
                    f[off[x] + v] = static_cast<Index>(lower[y] + (vm ? (*vm)[v] : v));
            }
        }
        for (std::size_t i = 0; k < n_max && i <= k; ++i) {
            auto& f = q.degeneracy_map(k, i);
            f.resize(q.count(k));
            const auto& upper = (*offsets)[k + 1];
            for (Index x = 0; x < chains->count(k); ++x) {
                Index y = chains->degeneracy(k, x, i);
                for (std::size_t v = 0; v < off[x + 1] - off[x]; ++v) f[off[x] + v] = static_cast<Index>(upper[y] + v);
            }
        }
    }
    q.set_describer([chains, pres, offsets](std::size_t k, Index s) {
        const auto& off = (*offsets)[k];
        Index x = static_cast<Index>(std::upper_bound(off.begin(), off.end(), s) - off.begin() - 1);
        const Probe& src = pres->probe(chains->vertex(k, x, 0));
        std::string r = src.id + ":" + src.graph.name(static_cast<Index>(s - off[x]));
        return k == 0 ? r : r + " " + chains->describe(k, x);
    });
    return out;
}

/// Faces that fail to commute with the augmentation to X, as "d_i at (k, s)".
inline std::vector<std::string> verify_augmentation(const QResolution& q) {
    std::vector<std::string> out;
    const auto& x = q.object;
    for (std::size_t k = 1; k <= x.n_max(); ++k)
        for (std::size_t i = 0; i <= k; ++i)
            for (Index s = 0; s < x.count(k); ++s)
                if (q.augmentation[k - 1][x.face(k, i, s)] != q.augmentation[k][s])
                    out.push_back("d_" + std::to_string(i) + " at degree " + std::to_string(k) + ", simplex " +
                                  x.describe(k, s));
    return out;
}

// ---- gauge monoid -------------------------------------------------------------

class GaugeMonoid {
public:
    static constexpr std::size_t default_cap = 100000;
    static constexpr std::size_t table_limit = 500;  // precompute products below this order

    GaugeMonoid() = default;

    /// Elements as vertex maps B -> B; `identity` indexes the identity map.
    GaugeMonoid(std::vector<std::vector<Index>> elements, Index identity)
        : elements_(std::move(elements)), identity_(identity) {
        for (Index e = 0; e < elements_.size(); ++e)
            if (!index_.emplace(elements_[e], e).second) throw ModelError("gauge monoid: repeated element");
        if (elements_.size() <= table_limit) {
            table_.resize(elements_.size() * elements_.size());
            for (Index a = 0; a < elements_.size(); ++a)
                for (Index b = 0; b < elements_.size(); ++b) table_[a * elements_.size() + b] = slow_compose(a, b);
        }
    }

    std::size_t order() const { return elements_.size(); }
    Index identity() const { return identity_; }
    const std::vector<Index>& element(Index e) const { return elements_[e]; }
    Index act(Index e, Index b) const { return elements_[e][b]; }

    /// a ∘ b: apply b first.
    Index compose(Index a, Index b) const {
        if (!table_.empty()) return table_[a * elements_.size() + b];
        return slow_compose(a, b);
    }

    std::optional<Index> find(const std::vector<Index>& f) const {
        auto it = index_.find(f);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    std::string name(Index e) const { return e == identity_ ? "id" : "m" + std::to_string(e); }

private:
    Index slow_compose(Index a, Index b) const {
        const auto& fa = elements_[a];
        const auto& fb = elements_[b];
        std::vector<Index> c(fb.size());
        for (std::size_t v = 0; v < fb.size(); ++v) c[v] = fa[fb[v]];
        auto it = index_.find(c);
        if (it == index_.end()) throw ModelError("gauge monoid is not closed under composition");
        return it->second;
    }

    std::vector<std::vector<Index>> elements_;
    Index identity_ = 0;
    std::map<std::vector<Index>, Index> index_;
    std::vector<Index> table_;
};

/// All graph endomorphisms of B commuting with pi, enumerated componentwise.
inline GaugeMonoid gauge_monoid(const Nebula& n, std::size_t cap = GaugeMonoid::default_cap) {
    const ProbeGraph& g = n.graph;
    std::vector<std::vector<Index>> over(n.x_size);
    for (Index v = 0; v < g.size(); ++v) over[n.pi[v]].push_back(v);
    std::vector<std::vector<Index>> members(g.component_count());
    for (Index v = 0; v < g.size(); ++v) members[g.component(v)].push_back(v);

    // options[c]: admissible images of the vertices of component c, identity first.
    std::vector<std::vector<std::vector<Index>>> options(members.size());
    for (std::size_t c = 0; c < members.size(); ++c) {
        // Breadth-first order so each vertex after the first has an assigned neighbour.
        std::vector<Index> order{members[c][0]};
        std::vector<char> seen(g.size(), 0);
        seen[members[c][0]] = 1;
        for (std::size_t h = 0; h < order.size(); ++h)
            for (Index w : g.neighbors(order[h]))
                if (!seen[w]) seen[w] = 1, order.push_back(w);
        std::vector<Index> image(g.size(), UINT32_MAX);
        auto& opts = options[c];
        std::function<void(std::size_t)> extend = [&](std::size_t depth) {
            if (depth == order.size()) {
                std::vector<Index> o;
                for (Index v : members[c]) o.push_back(image[v]);
                opts.push_back(std::move(o));
                if (opts.size() > cap)
                    throw ResourceLimit("gauge monoid: more than " + std::to_string(cap) +
                                        " maps on a single component");
                return;
            }
            Index v = order[depth];
            for (Index t : over[n.pi[v]]) {
                bool ok = true;
                for (Index w : g.neighbors(v))
                    if (image[w] != UINT32_MAX && !g.adjacent_or_equal(image[w], t)) ok = false;
                if (!ok) continue;
                image[v] = t;
                extend(depth + 1);
                image[v] = UINT32_MAX;
            }
        };
        extend(0);
        auto id = std::find(opts.begin(), opts.end(), members[c]);
        std::iter_swap(opts.begin(), id);
    }

    Integer order = 1;
    for (const auto& o : options) order *= o.size();
    if (order > cap)
        throw ResourceLimit("gauge monoid has " + order.str() + " elements, over the cap of " + std::to_string(cap));
    const auto total = static_cast<std::size_t>(order);
    std::vector<std::vector<Index>> elements;
    elements.reserve(total);
    std::vector<std::size_t> digit(options.size(), 0);
    for (std::size_t e = 0; e < total; ++e) {
        std::vector<Index> f(g.size());
        for (std::size_t c = 0; c < options.size(); ++c)
            for (std::size_t j = 0; j < members[c].size(); ++j) f[members[c][j]] = options[c][digit[c]][j];
        elements.push_back(std::move(f));
        for (std::size_t c = 0; c < digit.size(); ++c) {
            if (++digit[c] < options[c].size()) break;
            digit[c] = 0;
        }
    }
    return GaugeMonoid(std::move(elements), 0);
}

inline GaugeMonoid gauge_monoid(const PlotPresentation& p, std::size_t cap = GaugeMonoid::default_cap) {
    return gauge_monoid(nebula(p), cap);
}

/// Monoid and action laws, checked exhaustively; one entry per violation.
inline std::vector<std::string> verify_gauge_monoid(const GaugeMonoid& m, const Nebula& n) {
    std::vector<std::string> out;
    const std::size_t size = m.order();
    for (Index e = 0; e < size; ++e) {
        const auto& f = m.element(e);
        if (f.size() != n.graph.size()) {
            out.push_back(m.name(e) + " is not a map on B");
            continue;
        }
        for (Index v = 0; v < f.size(); ++v)
            if (n.pi[f[v]] != n.pi[v]) out.push_back(m.name(e) + " moves " + n.graph.name(v) + " off its point");
        if (!is_graph_map(n.graph, n.graph, f)) out.push_back(m.name(e) + " is not a graph map");
        if (m.compose(e, m.identity()) != e || m.compose(m.identity(), e) != e)
            out.push_back("identity law fails at " + m.name(e));
    }
    for (Index a = 0; a < size; ++a)
        for (Index b = 0; b < size; ++b) {
            Index ab = m.compose(a, b);
            for (Index v = 0; v < n.graph.size(); ++v)
                if (m.act(ab, v) != m.act(a, m.act(b, v))) {
                    out.push_back("composite " + m.name(a) + "∘" + m.name(b) + " does not act as the composite");
                    break;
                }
            for (Index c = 0; c < size; ++c)
                if (m.compose(m.compose(a, b), c) != m.compose(a, m.compose(b, c)))
                    out.push_back("associativity fails at (" + m.name(a) + ", " + m.name(b) + ", " + m.name(c) + ")");
        }
    return out;
}

// ---- B//M -----------------------------------------------------------------------

/// (B//M)_k = B × M^k; simplex (b; m_1, ..., m_k) is indexed b + |B|(m_1 + |M|(m_2 + ...)).
inline TruncatedSimplicialSet bar_construction(const Nebula& n, const GaugeMonoid& m, std::size_t n_max,
                                               std::size_t cap = 10000000) {
    const std::size_t nb = n.graph.size(), nm = m.order();
    for (Index e = 0; e < nm; ++e) {
        if (m.element(e).size() != nb) throw ModelError("gauge element " + m.name(e) + " is not a map on B");
        for (Index v = 0; v < nb; ++v)
            if (m.act(e, v) >= nb || n.pi[m.act(e, v)] != n.pi[v])
                throw ModelError("gauge element " + m.name(e) + " does not commute with the projection");
    }
    for (Index v = 0; v < nb; ++v)
        if (m.act(m.identity(), v) != v) throw ModelError("the identity of M does not act trivially");

    std::vector<std::size_t> count(n_max + 1);
    count[0] = nb;
    for (std::size_t k = 1; k <= n_max; ++k) {
        if (nm != 0 && count[k - 1] > cap / nm)
            throw ResourceLimit("B//M degree " + std::to_string(k) + " has " +
                                (Integer(count[k - 1]) * nm).str() + " simplices, over the cap of " +
                                std::to_string(cap));
        count[k] = count[k - 1] * nm;
    }
    TruncatedSimplicialSet out(n_max);
    std::vector<Index> word;
    auto encode = [&](Index b, const std::vector<Index>& w) {
        std::size_t idx = 0;
        for (std::size_t j = w.size(); j-- > 0;) idx = idx * nm + w[j];
        return static_cast<Index>(idx * nb + b);
    };
    for (std::size_t k = 0; k <= n_max; ++k) {
        out.set_count(k, count[k]);
        for (std::size_t i = 0; k > 0 && i <= k; ++i) out.face_map(k, i).resize(count[k]);
        for (std::size_t i = 0; k < n_max && i <= k; ++i) out.degeneracy_map(k, i).resize(count[k]);
        std::vector<Index> labels(count[k]);
        const std::size_t cb = n.graph.component_count();
        for (std::size_t s = 0; s < count[k]; ++s) {
            Index b = static_cast<Index>(s % nb);
            std::size_t rest = s / nb;
            labels[s] = static_cast<Index>(n.graph.component(b) + cb * rest);
            word.resize(k);
            for (std::size_t j = 0; j < k; ++j, rest /= nm) word[j] = static_cast<Index>(rest % nm);
            for (std::size_t i = 0; k > 0 && i <= k; ++i) {
                std::vector<Index> w;
                Index nb_vertex = b;
                if (i == 0) {
                    nb_vertex = m.act(word[0], b);
                    w.assign(word.begin() + 1, word.end());
                } else if (i == k) {
                    w.assign(word.begin(), word.end() - 1);
                } else {
                    w.assign(word.begin(), word.begin() + static_cast<std::ptrdiff_t>(i) - 1);
                    w.push_back(m.compose(word[i], word[i - 1]));
                    w.insert(w.end(), word.begin() + static_cast<std::ptrdiff_t>(i) + 1, word.end());
                }
                out.face_map(k, i)[s] = encode(nb_vertex, w);
            }
            for (std::size_t i = 0; k < n_max && i <= k; ++i) {
                std::vector<Index> w(word);
                w.insert(w.begin() + static_cast<std::ptrdiff_t>(i), m.identity());
                out.degeneracy_map(k, i)[s] = encode(b, w);
            }
        }
        std::size_t comps = cb;
        for (std::size_t j = 0; j < k; ++j) comps *= nm;
        out.set_components(k, std::move(labels), comps);
    }
    auto names = std::make_shared<std::vector<std::string>>(n.graph.vertices());
    auto mono = std::make_shared<GaugeMonoid>(m);
    out.set_describer([names, mono, nb, nm](std::size_t k, Index s) {
        std::string r = (*names)[s % nb];
        std::size_t rest = s / nb;
        if (k) r += " (";
        for (std::size_t j = 0; j < k; ++j, rest /= nm)
            r += (j ? ", " : "") + mono->name(static_cast<Index>(rest % nm));
        return k ? r + ")" : r;
    });
    return out;
}

// ---- Čech nerve of the nebula -------------------------------------------------------

inline TruncatedSimplicialSet cech_of_nebula(const PlotPresentation& p, std::size_t n_max,
                                             std::size_t cap = 10000000) {
    Nebula n = nebula(p);
    return cech_nerve(n.graph, n.pi, n.x_size, n_max, cap);
}

}  // namespace diffcech
