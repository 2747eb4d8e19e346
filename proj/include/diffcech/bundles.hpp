/**
 * Principal G-bundles over plot presentations for a finite group G.
 *
 * A plot cocycle labels every non-identity map f: U_p -> U_q of the
 * presentation with a component-constant function g_f: U_p -> G such that
 *
 *   g_{f0 ∘ f1}(x) = g_{f0}(f1(x)) · g_{f1}(x),   g_id = e.
 *
 * The bundle is the quotient of ∐_p U_p × G by the equivalence relation
 * generated by (p, u, h) ~ (q, f(u), g_f(u) h), with right action
 * [p, u, h]·a = [p, u, h a] and projection [p, u, h] ↦ p(u). A map of
 * cocycles h: g -> g' has one component-constant h_p: U_p -> G per probe with
 * g'_f(x) h_p(x) = h_q(f(x)) g_f(x), and induces [p, u, k] ↦ [p, u, h_p(u) k].
 *
 * Cover cocycles describe the same data for a cover of one graph by patches:
 * (x, i, h) ~ (x, j, g_ij(x) h) with g_ik = g_jk g_ij and g_ii = e.
 *
 * Cocycles up to isomorphism are the orbits of the gauge group G^{components}
 * acting on the finite set of cocycles; classification enumerates that set
 * under an explicit cap.
 */
#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "group.hpp"
#include "presentation.hpp"
#include "simplicial_set.hpp"

namespace diffcech {

// ---------------------------------------------------------------------------
// Group files

/// {"elements": [...], "unit": e, "mul": {"a,b": c}}, {"cyclic": n} or {"symmetric": n}.
inline FiniteGroup group_from_json(const nlohmann::ordered_json& j) {
    if (!j.is_object()) throw MalformedInput("group: expected an object");
    if (j.contains("cyclic")) {
        if (!j["cyclic"].is_number_unsigned()) throw MalformedInput("group: 'cyclic' must be a positive integer");
        return FiniteGroup::cyclic(j["cyclic"].get<std::size_t>());
    }
    if (j.contains("symmetric")) {
        if (!j["symmetric"].is_number_unsigned()) throw MalformedInput("group: 'symmetric' must be a positive integer");
        return FiniteGroup::symmetric(j["symmetric"].get<std::size_t>());
    }
    const auto& elements = detail::require_array(j, "elements", "group");
    std::vector<std::string> names;
    for (const auto& e : elements) names.push_back(detail::as_string(e, "group element"));
    std::map<std::string, Index> index;
    for (Index i = 0; i < names.size(); ++i)
        if (!index.emplace(names[i], i).second) throw MalformedInput("group: duplicate element '" + names[i] + "'");
    auto lookup = [&](const std::string& s) {
        auto it = index.find(s);
        if (it == index.end()) throw MalformedInput("group: unknown element '" + s + "'");
        return it->second;
    };
    Index unit = lookup(detail::as_string(detail::require(j, "unit", "group"), "group unit"));
    const auto& mul = detail::require(j, "mul", "group");
    if (!mul.is_object()) throw MalformedInput("group: 'mul' must be an object");
    const std::size_t n = names.size();
    std::vector<std::vector<Index>> table(n, std::vector<Index>(n, UINT32_MAX));
    for (const auto& [key, value] : mul.items()) {
        auto comma = key.find(',');
        if (comma == std::string::npos || key.find(',', comma + 1) != std::string::npos)
            throw MalformedInput("group: multiplication key '" + key + "' is not of the form \"a,b\"");
        Index a = lookup(key.substr(0, comma)), b = lookup(key.substr(comma + 1));
        if (table[a][b] != UINT32_MAX) throw MalformedInput("group: product '" + key + "' given twice");
        table[a][b] = lookup(detail::as_string(value, "group product"));
    }
    for (Index a = 0; a < n; ++a)
        for (Index b = 0; b < n; ++b)
            if (table[a][b] == UINT32_MAX)
                throw MalformedInput("group: product '" + names[a] + "," + names[b] + "' is missing");
    return FiniteGroup(std::move(names), std::move(table), unit);
}

inline FiniteGroup parse_group(const std::string& text) {
    nlohmann::ordered_json j;
    try {
        j = nlohmann::ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw MalformedInput(std::string("group: invalid JSON: ") + e.what());
    }
    return group_from_json(j);
}

inline nlohmann::ordered_json group_to_json(const FiniteGroup& g) {
    nlohmann::ordered_json j;
    j["elements"] = g.names();
    j["unit"] = g.name(g.unit());
    nlohmann::ordered_json mul = nlohmann::ordered_json::object();
    for (Index a = 0; a < g.order(); ++a)
        for (Index b = 0; b < g.order(); ++b) mul[g.name(a) + "," + g.name(b)] = g.name(g.mul(a, b));
    j["mul"] = std::move(mul);
    return j;
}

// ---------------------------------------------------------------------------
// BG, EG and the projection EG -> BG

/// A map of truncated simplicial sets, one table per degree.
struct SimplicialMap {
    std::vector<std::vector<Index>> degree;
};

/// Checks that the map commutes with every face and degeneracy.
inline std::vector<std::string> verify_simplicial_map(const SimplicialMap& f, const TruncatedSimplicialSet& x,
                                                      const TruncatedSimplicialSet& y) {
    std::vector<std::string> out;
    const std::size_t n_max = std::min(x.n_max(), y.n_max());
    if (f.degree.size() < n_max + 1) return {"map is missing degrees"};
    for (std::size_t k = 0; k <= n_max; ++k) {
        if (f.degree[k].size() != x.count(k)) {
            out.push_back("degree " + std::to_string(k) + " table has the wrong size");
            continue;
        }
        for (Index s = 0; s < x.count(k); ++s) {
            for (std::size_t i = 0; k > 0 && i <= k; ++i)
                if (f.degree[k - 1][x.face(k, i, s)] != y.face(k, i, f.degree[k][s]))
                    out.push_back("d_" + std::to_string(i) + " fails at " + x.describe(k, s));
            for (std::size_t i = 0; k < n_max && i <= k; ++i)
                if (f.degree[k + 1][x.degeneracy(k, i, s)] != y.degeneracy(k, i, f.degree[k][s]))
                    out.push_back("s_" + std::to_string(i) + " fails at " + x.describe(k, s));
        }
    }
    return out;
}

/// Nerve of G as a one-object category; a k-simplex is (a_1, ..., a_k) with index a_1 |G|^{k-1} + ... + a_k.
inline TruncatedSimplicialSet bg_nerve(const FiniteGroup& g, std::size_t n_max, std::size_t cap = 10000000) {
    return nerve(g.as_category(), n_max, cap);
}

/// The translation groupoid of G acting on itself: one arrow between any two elements.
inline FinCategory translation_groupoid(const FiniteGroup& g) {
    const std::size_t n = g.order();
    std::vector<std::string> objects(g.names());
    std::vector<FinCategory::Arrow> arrows;
    std::vector<Index> ids;
    for (Index a = 0; a < n; ++a) {
        ids.push_back(static_cast<Index>(a * n + a));
        for (Index b = 0; b < n; ++b) arrows.push_back({g.name(a) + "→" + g.name(b), a, b});
    }
    return FinCategory(std::move(objects), std::move(arrows), std::move(ids),
                       [n](Index later, Index first) { return static_cast<Index>((first / n) * n + later % n); });
}

/// EG_k = G^{k+1}; the simplex (g_0, ..., g_k) has index g_0 |G|^k + ... + g_k.
inline TruncatedSimplicialSet eg_nerve(const FiniteGroup& g, std::size_t n_max, std::size_t cap = 10000000) {
    return nerve(translation_groupoid(g), n_max, cap);
}

/// (g_0, ..., g_k) ↦ (g_1 g_0^{-1}, ..., g_k g_{k-1}^{-1}).
inline SimplicialMap eg_to_bg(const FiniteGroup& g, std::size_t n_max) {
    const std::size_t n = g.order();
    SimplicialMap f;
    std::size_t count = n;
    for (std::size_t k = 0; k <= n_max; ++k, count *= n) {
        std::vector<Index> table(count);
        std::vector<Index> digits(k + 1);
        for (std::size_t s = 0; s < count; ++s) {
            std::size_t rest = s;
            for (std::size_t j = k + 1; j-- > 0; rest /= n) digits[j] = static_cast<Index>(rest % n);
            std::size_t idx = 0;
            for (std::size_t j = 1; j <= k; ++j) idx = idx * n + g.mul(digits[j], g.inverse(digits[j - 1]));
            table[s] = static_cast<Index>(idx);
        }
        f.degree.push_back(std::move(table));
    }
    return f;
}

// ---------------------------------------------------------------------------
// Plot cocycles and their morphisms

/// Offsets of probe components in the global component numbering.
struct ComponentIndex {
    std::vector<Index> offset;  // first global component of each probe
    std::size_t count = 0;

    explicit ComponentIndex(const PlotPresentation& p) {
        for (const auto& pr : p.probes()) {
            offset.push_back(static_cast<Index>(count));
            count += pr.graph.component_count();
        }
    }

    Index global(const PlotPresentation& p, Index probe, Index v) const {
        return offset[probe] + p.probe(probe).graph.component(v);
    }
};

/// labels[m][c] is the value of g_m on component c of the source probe of map m.
struct PlotCocycle {
    std::vector<std::vector<Index>> labels;

    Index value(const PlotPresentation& p, Index m, Index v) const {
        return labels[m][p.probe(p.map(m).from).graph.component(v)];
    }

    friend bool operator==(const PlotCocycle&, const PlotCocycle&) = default;
};

/// h[c] is the value of the gauge transformation on global component c.
struct CocycleMorphism {
    std::vector<Index> values;

    friend bool operator==(const CocycleMorphism&, const CocycleMorphism&) = default;
};

inline PlotCocycle trivial_cocycle(const PlotPresentation& p, const FiniteGroup& g) {
    PlotCocycle c;
    for (const auto& m : p.maps()) c.labels.emplace_back(p.probe(m.from).graph.component_count(), g.unit());
    return c;
}

namespace detail {

inline bool is_identity_map(const PlotPresentation& p, Index m) { return p.identity(p.map(m).from) == m; }

/// Fills the labels of generated composites from their factors, in closure order.
inline void derive_composite_labels(const PlotPresentation& p, const FiniteGroup& g, PlotCocycle& c,
                                    std::vector<bool>& known) {
    const FinCategory cat = p.category();
    for (Index m = 0; m < p.maps().size(); ++m) {
        if (known[m]) continue;
        if (is_identity_map(p, m)) {
            known[m] = true;
            continue;
        }
        bool done = false;
        for (Index f = 0; f < p.maps().size() && !done; ++f) {
            if (!known[f] || is_identity_map(p, f) || p.map(f).from != p.map(m).from) continue;
            for (Index h : cat.out_arrows(p.map(f).to)) {
                if (!known[h] || is_identity_map(p, h) || p.compose(h, f) != m) continue;
                const Probe& src = p.probe(p.map(m).from);
                for (Index v = 0; v < src.graph.size(); ++v)
                    c.labels[m][src.graph.component(v)] =
                        g.mul(c.value(p, h, p.map(f).vertex_map[v]), c.value(p, f, v));
                done = true;
                break;
            }
        }
        if (!done) throw ModelError("cannot derive a label for composite '" + p.map(m).id + "'");
        known[m] = true;
    }
}

}  // namespace detail

/// Identity and composition laws on every composable pair and every vertex.
inline std::vector<std::string> verify_plot_cocycle(const PlotPresentation& p, const FiniteGroup& g,
                                                    const PlotCocycle& c) {
    std::vector<std::string> out;
    if (c.labels.size() != p.maps().size()) return {"cocycle has " + std::to_string(c.labels.size()) +
                                                     " label sets for " + std::to_string(p.maps().size()) + " maps"};
    for (Index m = 0; m < p.maps().size(); ++m) {
        const Probe& src = p.probe(p.map(m).from);
        if (c.labels[m].size() != src.graph.component_count()) {
            out.push_back("map '" + p.map(m).id + "' has the wrong number of component labels");
            return out;
        }
        for (Index l : c.labels[m])
            if (l >= g.order()) {
                out.push_back("map '" + p.map(m).id + "' has a label outside the group");
                return out;
            }
    }
    for (Index o = 0; o < p.probes().size(); ++o) {
        Index id = p.identity(o);
        for (Index l : c.labels[id])
            if (l != g.unit()) out.push_back("identity '" + p.map(id).id + "' is labelled " + g.name(l));
    }
    const FinCategory cat = p.category();
    for (Index f = 0; f < p.maps().size(); ++f) {
        const ProbeMap& mf = p.map(f);
        const Probe& src = p.probe(mf.from);
        for (Index h : cat.out_arrows(mf.to)) {
            Index hf = p.compose(h, f);
            for (Index v = 0; v < src.graph.size(); ++v) {
                Index lhs = c.value(p, hf, v);
                Index rhs = g.mul(c.value(p, h, mf.vertex_map[v]), c.value(p, f, v));
                if (lhs != rhs) {
                    out.push_back("composition law fails for " + p.map(h).id + " after " + mf.id + " at vertex " +
                                  src.graph.name(v) + " of " + src.id + ": " + g.name(lhs) + " ≠ " + g.name(rhs));
                    break;
                }
            }
        }
    }
    return out;
}

/// g'_f(x) h_from(x) = h_to(f(x)) g_f(x) for every map f and vertex x.
inline std::vector<std::string> verify_cocycle_morphism(const PlotPresentation& p, const FiniteGroup& g,
                                                        const PlotCocycle& from, const PlotCocycle& to,
                                                        const CocycleMorphism& h) {
    const ComponentIndex ci(p);
    if (h.values.size() != ci.count) return {"morphism has the wrong number of component values"};
    std::vector<std::string> out;
    for (Index m = 0; m < p.maps().size(); ++m) {
        const ProbeMap& pm = p.map(m);
        const Probe& src = p.probe(pm.from);
        for (Index v = 0; v < src.graph.size(); ++v) {
            Index lhs = g.mul(to.value(p, m, v), h.values[ci.global(p, pm.from, v)]);
            Index rhs = g.mul(h.values[ci.global(p, pm.to, pm.vertex_map[v])], from.value(p, m, v));
            if (lhs != rhs) {
                out.push_back("naturality fails for " + pm.id + " at vertex " + src.graph.name(v) + " of " + src.id);
                break;
            }
        }
    }
    return out;
}

/// The cocycle h·g with (h·g)_f(x) = h_to(f(x)) g_f(x) h_from(x)^{-1}.
inline PlotCocycle gauge_transform(const PlotPresentation& p, const FiniteGroup& g, const CocycleMorphism& h,
                                   const PlotCocycle& c) {
    const ComponentIndex ci(p);
    PlotCocycle out = c;
    for (Index m = 0; m < p.maps().size(); ++m) {
        const ProbeMap& pm = p.map(m);
        const Probe& src = p.probe(pm.from);
        for (Index v = 0; v < src.graph.size(); ++v) {
            Index hv = h.values[ci.global(p, pm.from, v)];
            Index ht = h.values[ci.global(p, pm.to, pm.vertex_map[v])];
            out.labels[m][src.graph.component(v)] = g.mul(g.mul(ht, c.value(p, m, v)), g.inverse(hv));
        }
    }
    return out;
}

/// {"labels": {map_id: {component: element}}}; components are the decimal indices of the source probe's components.
/// Every declared map must be labelled; composites may be given and are otherwise derived from their factors.
inline PlotCocycle cocycle_from_json(const PlotPresentation& p, const FiniteGroup& g, const nlohmann::ordered_json& j) {
    if (!j.is_object()) throw MalformedInput("cocycle: expected an object");
    const auto& labels = detail::require(j, "labels", "cocycle");
    if (!labels.is_object()) throw MalformedInput("cocycle: 'labels' must be an object");
    PlotCocycle c = trivial_cocycle(p, g);
    std::vector<bool> known(p.maps().size(), false);
    std::map<std::string, Index> by_id;
    for (Index m = 0; m < p.maps().size(); ++m) by_id[p.map(m).id] = m;
    for (const auto& [id, per_component] : labels.items()) {
        auto it = by_id.find(id);
        if (it == by_id.end()) throw MalformedInput("cocycle: unknown map '" + id + "'");
        const Index m = it->second;
        const Probe& src = p.probe(p.map(m).from);
        if (!per_component.is_object()) throw MalformedInput("cocycle: labels of '" + id + "' must be an object");
        std::vector<bool> seen(src.graph.component_count(), false);
        for (const auto& [key, value] : per_component.items()) {
            const bool numeric = !key.empty() && key.size() < 10 &&
                                 std::all_of(key.begin(), key.end(), [](char ch) { return ch >= '0' && ch <= '9'; });
            const std::size_t comp = numeric ? std::stoul(key) : SIZE_MAX;
            if (comp >= src.graph.component_count())
                throw MalformedInput("cocycle: '" + id + "' is labelled at '" + key +
                                     "'; labels are per component of " + src.id + " (0.." +
                                     std::to_string(src.graph.component_count() - 1) + ")");
            seen[comp] = true;
            c.labels[m][comp] = g.index_of(detail::as_string(value, "cocycle label"));
        }
        if (std::find(seen.begin(), seen.end(), false) != seen.end())
            throw MalformedInput("cocycle: '" + id + "' does not label every component of " + src.id);
        known[m] = true;
    }
    for (Index m = 0; m < p.maps().size(); ++m)
        if (!known[m] && !p.map(m).generated) throw MalformedInput("cocycle: map '" + p.map(m).id + "' is not labelled");
    detail::derive_composite_labels(p, g, c, known);
    return c;
}

inline PlotCocycle parse_cocycle(const PlotPresentation& p, const FiniteGroup& g, const std::string& text) {
    nlohmann::ordered_json j;
    try {
        j = nlohmann::ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw MalformedInput(std::string("cocycle: invalid JSON: ") + e.what());
    }
    return cocycle_from_json(p, g, j);
}

/// Labels of the declared maps, in map order.
inline nlohmann::ordered_json cocycle_to_json(const PlotPresentation& p, const FiniteGroup& g, const PlotCocycle& c) {
    nlohmann::ordered_json labels = nlohmann::ordered_json::object();
    for (Index m = 0; m < p.maps().size(); ++m) {
        if (p.map(m).generated) continue;
        nlohmann::ordered_json per = nlohmann::ordered_json::object();
        for (Index k = 0; k < c.labels[m].size(); ++k) per[std::to_string(k)] = g.name(c.labels[m][k]);
        labels[p.map(m).id] = std::move(per);
    }
    nlohmann::ordered_json j;
    j["labels"] = std::move(labels);
    return j;
}

// ---------------------------------------------------------------------------
// Bundle models

/// Total graph with a right G-action and a projection to the points of X.
struct BundleModel {
    FiniteGroup group;
    ProbeGraph total;
    std::vector<Index> projection;            // point of X under each total vertex
    std::vector<std::vector<Index>> action;   // action[b][a] = b·a
    // Generator bookkeeping for quotient constructions: class of (patch, u, h) is
    // generator_class[(generator_offset[patch] + u) * |G| + h]. Empty for hand-built models.
    std::vector<Index> generator_offset;
    std::vector<Index> generator_class;

    std::size_t size() const { return total.size(); }

    Index generator(Index patch, Index u, Index h) const {
        return generator_class[(static_cast<std::size_t>(generator_offset[patch]) + u) * group.order() + h];
    }
};

namespace detail {

/// Quotient of ∐ patches × G by a union-find already holding the identifications.
/// Vertex names are "[patch,u,h]" of the least generator in each class.
inline BundleModel quotient_bundle(const FiniteGroup& g, const std::vector<std::string>& patch_names,
                                   const std::vector<const ProbeGraph*>& patches,
                                   const std::vector<std::vector<Index>>& to_space, UnionFind& uf) {
    const std::size_t n = g.order();
    BundleModel b;
    b.group = g;
    Index total = 0;
    for (const auto* pg : patches) {
        b.generator_offset.push_back(total);
        total += static_cast<Index>(pg->size());
    }
    std::size_t classes = 0;
    b.generator_class = uf.labels(&classes);
    std::vector<std::string> names(classes);
    b.projection.assign(classes, UINT32_MAX);
    b.action.assign(classes, std::vector<Index>(n, UINT32_MAX));
    std::vector<std::pair<Index, Index>> edges;
    for (Index p = 0; p < patches.size(); ++p) {
        const ProbeGraph& pg = *patches[p];
        for (Index u = 0; u < pg.size(); ++u)
            for (Index h = 0; h < n; ++h) {
                Index c = b.generator(p, u, h);
                if (names[c].empty()) names[c] = "[" + patch_names[p] + "," + pg.name(u) + "," + g.name(h) + "]";
                if (b.projection[c] == UINT32_MAX)
                    b.projection[c] = to_space[p][u];
                else if (b.projection[c] != to_space[p][u])
                    throw ModelError("bundle: " + names[c] + " lies over two points");
                for (Index a = 0; a < n; ++a) {
                    Index t = b.generator(p, u, g.mul(h, a));
                    if (b.action[c][a] == UINT32_MAX)
                        b.action[c][a] = t;
                    else if (b.action[c][a] != t)
                        throw ModelError("bundle: the action by " + g.name(a) + " is not well defined at " + names[c]);
                }
            }
        for (auto [u, v] : pg.edges())
            for (Index h = 0; h < n; ++h) {
                Index x = b.generator(p, u, h), y = b.generator(p, v, h);
                if (x != y) edges.emplace_back(x, y);
            }
    }
    b.total = ProbeGraph(std::move(names), edges);
    return b;
}

}  // namespace detail

/// Union-find over (p, u, h) ~ (q, f(u), g_f(u) h) for every non-identity map f: p -> q.
inline BundleModel bundle_from_plot_cocycle(const PlotPresentation& p, const FiniteGroup& g, const PlotCocycle& c) {
    auto bad = verify_plot_cocycle(p, g, c);
    if (!bad.empty()) throw ModelError("invalid cocycle: " + bad.front());
    const std::size_t n = g.order();
    std::vector<Index> offset;
    std::size_t total = 0;
    for (const auto& pr : p.probes()) {
        offset.push_back(static_cast<Index>(total));
        total += pr.graph.size();
    }
    UnionFind uf(total * n);
    for (Index m = 0; m < p.maps().size(); ++m) {
        if (detail::is_identity_map(p, m)) continue;
        const ProbeMap& pm = p.map(m);
        for (Index u = 0; u < pm.vertex_map.size(); ++u)
            for (Index h = 0; h < n; ++h)
                uf.unite((offset[pm.from] + u) * n + h,
                         (offset[pm.to] + pm.vertex_map[u]) * n + g.mul(c.value(p, m, u), h));
    }
    std::vector<std::string> names;
    std::vector<const ProbeGraph*> graphs;
    std::vector<std::vector<Index>> to_space;
    for (const auto& pr : p.probes()) {
        names.push_back(pr.id);
        graphs.push_back(&pr.graph);
        to_space.push_back(pr.to_space);
    }
    return detail::quotient_bundle(g, names, graphs, to_space, uf);
}

/// The product bundle X × G over a graph whose vertices are the points.
inline BundleModel trivial_bundle(const ProbeGraph& x, const FiniteGroup& g) {
    std::vector<Index> ident(x.size());
    for (Index v = 0; v < x.size(); ++v) ident[v] = v;
    UnionFind uf(x.size() * g.order());
    return detail::quotient_bundle(g, {"X"}, {&x}, {ident}, uf);
}

// ---------------------------------------------------------------------------
// Cover cocycles

/// A cover of one graph by vertex sets; patches and intersections carry the induced subgraphs.
class GraphCover {
public:
    GraphCover(ProbeGraph base, std::vector<std::vector<Index>> patches)
        : base_(std::move(base)), patches_(std::move(patches)) {
        if (patches_.empty()) throw MalformedInput("cover has no patches");
        member_.assign(patches_.size(), std::vector<Index>(base_.size(), UINT32_MAX));
        for (Index i = 0; i < patches_.size(); ++i) {
            auto& pv = patches_[i];
            std::sort(pv.begin(), pv.end());
            pv.erase(std::unique(pv.begin(), pv.end()), pv.end());
            for (Index k = 0; k < pv.size(); ++k) {
                if (pv[k] >= base_.size()) throw MalformedInput("cover patch vertex out of range");
                member_[i][pv[k]] = k;
            }
            graphs_.push_back(induced(pv));
        }
        for (Index v = 0; v < base_.size(); ++v) {
            bool covered = false;
            for (Index i = 0; i < patches_.size(); ++i) covered = covered || contains(i, v);
            if (!covered) throw MalformedInput("cover misses vertex '" + base_.name(v) + "'");
        }
        for (auto [a, b] : base_.edges()) {
            bool covered = false;
            for (Index i = 0; i < patches_.size(); ++i) covered = covered || (contains(i, a) && contains(i, b));
            if (!covered) throw MalformedInput("cover misses edge " + base_.name(a) + "-" + base_.name(b));
        }
        const std::size_t n = patches_.size();
        overlap_.assign(n * n, {});
        overlap_graph_.resize(n * n);
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < n; ++j) {
                auto& o = overlap_[i * n + j];
                for (Index v : patches_[i])
                    if (contains(j, v)) o.push_back(v);
                overlap_graph_[i * n + j] = induced(o);
            }
    }

    const ProbeGraph& base() const { return base_; }
    std::size_t patch_count() const { return patches_.size(); }
    const std::vector<Index>& patch(Index i) const { return patches_[i]; }
    const ProbeGraph& patch_graph(Index i) const { return graphs_[i]; }
    bool contains(Index i, Index v) const { return member_[i][v] != UINT32_MAX; }
    /// Position of base vertex v in patch i.
    Index local(Index i, Index v) const { return member_[i][v]; }

    /// Base vertices of U_i ∩ U_j and the induced graph on them.
    const std::vector<Index>& overlap(Index i, Index j) const { return overlap_[i * patches_.size() + j]; }
    const ProbeGraph& overlap_graph(Index i, Index j) const { return overlap_graph_[i * patches_.size() + j]; }

    /// Component of U_i ∩ U_j containing base vertex v.
    Index overlap_component(Index i, Index j, Index v) const {
        const auto& o = overlap(i, j);
        auto it = std::lower_bound(o.begin(), o.end(), v);
        return overlap_graph(i, j).component(static_cast<Index>(it - o.begin()));
    }

    std::string patch_name(Index i) const { return "U" + std::to_string(i); }

private:
    ProbeGraph induced(const std::vector<Index>& vs) const {
        std::vector<std::string> names;
        for (Index v : vs) names.push_back(base_.name(v));
        std::vector<std::pair<Index, Index>> edges;
        for (auto [a, b] : base_.edges()) {
            auto ia = std::lower_bound(vs.begin(), vs.end(), a), ib = std::lower_bound(vs.begin(), vs.end(), b);
            if (ia != vs.end() && *ia == a && ib != vs.end() && *ib == b)
                edges.emplace_back(static_cast<Index>(ia - vs.begin()), static_cast<Index>(ib - vs.begin()));
        }
        return ProbeGraph(std::move(names), edges);
    }

    ProbeGraph base_;
    std::vector<std::vector<Index>> patches_;
    std::vector<std::vector<Index>> member_;
    std::vector<ProbeGraph> graphs_;
    std::vector<std::vector<Index>> overlap_;
    std::vector<ProbeGraph> overlap_graph_;
};

/// labels[i][j][c] = g_ij on component c of U_i ∩ U_j, for every ordered pair.
struct CoverCocycle {
    std::vector<std::vector<std::vector<Index>>> labels;

    Index value(const GraphCover& u, Index i, Index j, Index v) const {
        return labels[i][j][u.overlap_component(i, j, v)];
    }
};

/// Cover cocycle from the labels for i < j; g_ji = g_ij^{-1} and g_ii = e.
inline CoverCocycle cover_cocycle(const GraphCover& u, const FiniteGroup& g,
                                  const std::map<std::pair<Index, Index>, std::vector<Index>>& upper) {
    const std::size_t n = u.patch_count();
    CoverCocycle c;
    c.labels.assign(n, std::vector<std::vector<Index>>(n));
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) c.labels[i][j].assign(u.overlap_graph(i, j).component_count(), g.unit());
    for (const auto& [ij, values] : upper) {
        auto [i, j] = ij;
        if (i >= j || j >= n) throw MalformedInput("cover cocycle labels are given for patch pairs i < j");
        if (values.size() != c.labels[i][j].size())
            throw MalformedInput("cover cocycle: U" + std::to_string(i) + " ∩ U" + std::to_string(j) + " has " +
                                 std::to_string(c.labels[i][j].size()) + " components");
        c.labels[i][j] = values;
        // U_i ∩ U_j and U_j ∩ U_i are the same vertex set, so components line up.
        for (Index k = 0; k < values.size(); ++k) c.labels[j][i][k] = g.inverse(values[k]);
    }
    return c;
}

/// g_ii = e and g_ik = g_jk g_ij on every triple intersection.
inline std::vector<std::string> verify_cover_cocycle(const GraphCover& u, const FiniteGroup& g, const CoverCocycle& c) {
    std::vector<std::string> out;
    const std::size_t n = u.patch_count();
    for (Index i = 0; i < n; ++i)
        for (Index v : u.patch(i))
            if (c.value(u, i, i, v) != g.unit()) {
                out.push_back("g_" + std::to_string(i) + std::to_string(i) + " is not the unit");
                break;
            }
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j)
            for (Index k = 0; k < n; ++k)
                for (Index v : u.overlap(i, j)) {
                    if (!u.contains(k, v)) continue;
                    if (c.value(u, i, k, v) != g.mul(c.value(u, j, k, v), c.value(u, i, j, v))) {
                        out.push_back("cocycle condition fails on U" + std::to_string(i) + " ∩ U" + std::to_string(j) +
                                      " ∩ U" + std::to_string(k) + " at " + u.base().name(v));
                        break;
                    }
                }
    return out;
}

/// Quotient of ∐ U_i × G by (x, i, h) ~ (x, j, g_ij(x) h).
inline BundleModel bundle_from_cover_cocycle(const GraphCover& u, const FiniteGroup& g, const CoverCocycle& c) {
    auto bad = verify_cover_cocycle(u, g, c);
    if (!bad.empty()) throw ModelError("invalid cover cocycle: " + bad.front());
    const std::size_t n = g.order(), np = u.patch_count();
    std::vector<Index> offset;
    std::size_t total = 0;
    for (Index i = 0; i < np; ++i) {
        offset.push_back(static_cast<Index>(total));
        total += u.patch(i).size();
    }
    UnionFind uf(total * n);
    for (Index i = 0; i < np; ++i)
        for (Index j = 0; j < np; ++j)
            for (Index v : u.overlap(i, j))
                for (Index h = 0; h < n; ++h)
                    uf.unite((offset[i] + u.local(i, v)) * n + h, (offset[j] + u.local(j, v)) * n + g.mul(c.value(u, i, j, v), h));
    std::vector<std::string> names;
    std::vector<const ProbeGraph*> graphs;
    std::vector<std::vector<Index>> to_space;
    for (Index i = 0; i < np; ++i) {
        names.push_back(u.patch_name(i));
        graphs.push_back(&u.patch_graph(i));
        to_space.push_back(u.patch(i));
    }
    return detail::quotient_bundle(g, names, graphs, to_space, uf);
}

/// Presentation with probes U_i and U_i ∩ U_j (i < j, non-empty) and the inclusions of the latter.
inline PlotPresentation cover_presentation(const GraphCover& u) {
    std::vector<Probe> probes;
    std::vector<ProbeMap> maps;
    for (Index i = 0; i < u.patch_count(); ++i) probes.push_back({u.patch_name(i), u.patch_graph(i), u.patch(i)});
    for (Index i = 0; i < u.patch_count(); ++i)
        for (Index j = i + 1; j < u.patch_count(); ++j) {
            if (u.overlap(i, j).empty()) continue;
            Index q = static_cast<Index>(probes.size());
            probes.push_back({u.patch_name(i) + "∩" + u.patch_name(j), u.overlap_graph(i, j), u.overlap(i, j)});
            for (Index t : {i, j}) {
                ProbeMap m{probes[q].id + "→" + u.patch_name(t), q, t, {}, false};
                for (Index v : u.overlap(i, j)) m.vertex_map.push_back(u.local(t, v));
                maps.push_back(std::move(m));
            }
        }
    return PlotPresentation(u.base().vertices(), probes, maps);
}

/// The plot cocycle on cover_presentation labelling U_ij -> U_i by e and U_ij -> U_j by g_ij.
inline PlotCocycle plot_cocycle_from_cover(const GraphCover& u, const FiniteGroup& g, const CoverCocycle& c) {
    PlotPresentation p = cover_presentation(u);
    PlotCocycle out = trivial_cocycle(p, g);
    for (Index m = 0; m < p.maps().size(); ++m) {
        const ProbeMap& pm = p.map(m);
        if (pm.generated) continue;
        Index i = 0, j = 0;
        for (Index a = 0; a < u.patch_count(); ++a)
            for (Index b = a + 1; b < u.patch_count(); ++b)
                if (p.probe(pm.from).id == u.patch_name(a) + "∩" + u.patch_name(b)) i = a, j = b;
        if (pm.to != j) continue;
        const auto& o = u.overlap(i, j);
        for (Index k = 0; k < o.size(); ++k)
            out.labels[m][p.probe(pm.from).graph.component(k)] = c.value(u, i, j, o[k]);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Principality

struct BundleViolation {
    std::string kind;  // action, free, projection, orbit, fiber-product, trivialization
    std::string message;
};

namespace detail {

/// Vertices of the total graph over each point.
inline std::vector<std::vector<Index>> fibers(const BundleModel& b, std::size_t points) {
    std::vector<std::vector<Index>> out(points);
    for (Index v = 0; v < b.size(); ++v)
        if (b.projection[v] < points) out[b.projection[v]].push_back(v);
    return out;
}

/// A section over probe q: sigma(u) over q(u), adjacent-or-equal along the edges of U_q.
inline std::optional<std::vector<Index>> find_section(const Probe& q, const BundleModel& b,
                                                      const std::vector<std::vector<Index>>& fib) {
    const std::size_t n = q.graph.size();
    std::vector<Index> order;
    std::vector<bool> placed(n, false);
    for (Index r = 0; r < n; ++r) {
        if (placed[r]) continue;
        std::vector<Index> queue{r};
        placed[r] = true;
        for (std::size_t h = 0; h < queue.size(); ++h)
            for (Index w : q.graph.neighbors(queue[h]))
                if (!placed[w]) placed[w] = true, queue.push_back(w);
        order.insert(order.end(), queue.begin(), queue.end());
    }
    std::vector<Index> sigma(n, UINT32_MAX);
    std::vector<std::size_t> choice(n, 0);
    std::size_t pos = 0;
    while (pos < n) {
        const Index u = order[pos];
        const auto& f = fib[q.to_space[u]];
        bool ok = false;
        while (choice[pos] < f.size() && !ok) {
            Index cand = f[choice[pos]++];
            ok = true;
            for (Index w : q.graph.neighbors(u))
                if (sigma[w] != UINT32_MAX && !b.total.adjacent_or_equal(cand, sigma[w])) ok = false;
            if (ok) sigma[u] = cand;
        }
        if (ok) {
            ++pos;
            continue;
        }
        choice[pos] = 0;
        sigma[u] = UINT32_MAX;
        if (pos == 0) return std::nullopt;
        --pos;
        sigma[order[pos]] = UINT32_MAX;
    }
    return sigma;
}

}  // namespace detail

/// Action laws, freeness, invariance of the projection, single-orbit fibers, the shear map
/// (b, a) ↦ (b, b·a) onto B ×_X B, and triviality of the pullback over every probe.
inline std::vector<BundleViolation> verify_principal(const PlotPresentation& p, const BundleModel& b) {
    std::vector<BundleViolation> out;
    const FiniteGroup& g = b.group;
    const std::size_t n = g.order();
    auto name = [&](Index v) { return b.total.name(v); };
    if (b.action.size() != b.size() || b.projection.size() != b.size()) return {{"action", "tables have the wrong size"}};
    for (Index v = 0; v < b.size(); ++v) {
        if (b.projection[v] >= p.points().size()) return {{"projection", name(v) + " lies over no point"}};
        if (b.action[v].size() != n) return {{"action", "action table of " + name(v) + " has the wrong size"}};
        for (Index a = 0; a < n; ++a)
            if (b.action[v][a] >= b.size()) return {{"action", name(v) + "·" + g.name(a) + " is out of range"}};
    }
    for (Index v = 0; v < b.size(); ++v) {
        if (b.action[v][g.unit()] != v) out.push_back({"action", name(v) + "·e ≠ " + name(v)});
        for (Index a = 0; a < n; ++a) {
            for (Index c = 0; c < n; ++c)
                if (b.action[b.action[v][a]][c] != b.action[v][g.mul(a, c)]) {
                    out.push_back({"action", "(" + name(v) + "·" + g.name(a) + ")·" + g.name(c) + " ≠ " + name(v) + "·" +
                                                 g.name(g.mul(a, c))});
                    break;
                }
            if (a != g.unit() && b.action[v][a] == v) out.push_back({"free", g.name(a) + " fixes " + name(v)});
            if (b.projection[b.action[v][a]] != b.projection[v])
                out.push_back({"projection", name(v) + "·" + g.name(a) + " changes the base point"});
        }
    }
    for (auto [x, y] : b.total.edges())
        for (Index a = 0; a < n; ++a)
            if (!b.total.adjacent_or_equal(b.action[x][a], b.action[y][a])) {
                out.push_back({"action", g.name(a) + " tears the edge " + name(x) + "-" + name(y)});
                break;
            }
    auto fib = detail::fibers(b, p.points().size());
    for (Index x = 0; x < fib.size(); ++x) {
        if (fib[x].empty()) continue;
        std::vector<Index> orbit(b.action[fib[x][0]]);
        std::sort(orbit.begin(), orbit.end());
        orbit.erase(std::unique(orbit.begin(), orbit.end()), orbit.end());
        if (orbit != fib[x])
            out.push_back({"orbit", "the fiber over " + p.points()[x] + " has " + std::to_string(fib[x].size()) +
                                        " elements and the orbit of " + name(fib[x][0]) + " has " +
                                        std::to_string(orbit.size())});
    }
    // Shear map: injective and onto the fiber product, counted fiber by fiber.
    for (Index x = 0; x < fib.size(); ++x) {
        std::vector<std::pair<Index, Index>> image;
        for (Index v : fib[x])
            for (Index a = 0; a < n; ++a) image.emplace_back(v, b.action[v][a]);
        std::sort(image.begin(), image.end());
        const bool injective = std::adjacent_find(image.begin(), image.end()) == image.end();
        if (!injective || image.size() != fib[x].size() * fib[x].size())
            out.push_back({"fiber-product", "(b, a) ↦ (b, b·a) is not a bijection onto the fiber product over " +
                                                p.points()[x] + " (" + std::to_string(image.size()) + " pairs for " +
                                                std::to_string(fib[x].size() * fib[x].size()) + ")"});
    }
    if (!out.empty()) return out;
    for (const auto& q : p.probes()) {
        bool empty_fiber = false;
        for (Index pt : q.to_space) empty_fiber = empty_fiber || fib[pt].empty();
        if (empty_fiber) {
            out.push_back({"trivialization", "the bundle is empty over part of " + q.id});
            continue;
        }
        auto sigma = detail::find_section(q, b, fib);
        if (!sigma) {
            out.push_back({"trivialization", "no section over " + q.id});
            continue;
        }
        // (u, a) ↦ (u, sigma(u)·a) must be a graph isomorphism U_q × G -> q*B.
        auto pull_edges = [&](std::vector<std::pair<std::size_t, std::size_t>>& edges) {
            // Pullback elements (u, v), v over q(u), numbered by (u, position of v in its fiber).
            for (auto [u, w] : q.graph.edges())
                for (Index i = 0; i < fib[q.to_space[u]].size(); ++i)
                    for (Index j = 0; j < fib[q.to_space[w]].size(); ++j)
                        if (b.total.adjacent_or_equal(fib[q.to_space[u]][i], fib[q.to_space[w]][j]))
                            edges.emplace_back(u * n + i, w * n + j);
            // Edges inside one fiber would survive in the pullback but not in U × G.
            for (Index u = 0; u < q.graph.size(); ++u) {
                const auto& f = fib[q.to_space[u]];
                for (Index i = 0; i < f.size(); ++i)
                    for (Index j = i + 1; j < f.size(); ++j)
                        if (b.total.adjacent_or_equal(f[i], f[j])) edges.emplace_back(u * n + i, u * n + j);
            }
        };
        auto position = [&](Index u, Index v) {
            const auto& f = fib[q.to_space[u]];
            return static_cast<std::size_t>(std::lower_bound(f.begin(), f.end(), v) - f.begin());
        };
        std::vector<std::pair<std::size_t, std::size_t>> pulled, pushed;
        pull_edges(pulled);
        for (auto [u, w] : q.graph.edges())
            for (Index a = 0; a < n; ++a)
                pushed.emplace_back(u * n + position(u, b.action[(*sigma)[u]][a]),
                                    w * n + position(w, b.action[(*sigma)[w]][a]));
        std::sort(pulled.begin(), pulled.end());
        std::sort(pushed.begin(), pushed.end());
        if (pulled != pushed) {
            out.push_back({"trivialization", "the pullback over " + q.id + " is not U × G: " +
                                                 std::to_string(pulled.size()) + " edges against " +
                                                 std::to_string(pushed.size())});
        }
    }
    return out;
}

/// A G-equivariant graph isomorphism over X, as a table on total vertices, or nullopt.
inline std::optional<std::vector<Index>> find_bundle_isomorphism(const BundleModel& a, const BundleModel& b,
                                                                 std::size_t points) {
    const std::size_t n = a.group.order();
    if (b.group.order() != n || a.size() != b.size() || a.total.edges().size() != b.total.edges().size())
        return std::nullopt;
    auto fa = detail::fibers(a, points), fb = detail::fibers(b, points);
    for (Index x = 0; x < points; ++x)
        if (fa[x].size() != fb[x].size()) return std::nullopt;
    // Base points in breadth-first order over the adjacency induced by total edges.
    std::vector<std::vector<Index>> near(points);
    for (auto [u, v] : a.total.edges()) {
        near[a.projection[u]].push_back(a.projection[v]);
        near[a.projection[v]].push_back(a.projection[u]);
    }
    std::vector<Index> order;
    std::vector<bool> seen(points, false);
    for (Index r = 0; r < points; ++r) {
        if (seen[r] || fa[r].empty()) continue;
        std::vector<Index> queue{r};
        seen[r] = true;
        for (std::size_t h = 0; h < queue.size(); ++h)
            for (Index w : near[queue[h]])
                if (!seen[w]) seen[w] = true, queue.push_back(w);
        order.insert(order.end(), queue.begin(), queue.end());
    }
    std::vector<Index> phi(a.size(), UINT32_MAX);
    auto assign = [&](Index x, Index target) {
        const Index r = fa[x][0];
        for (Index g = 0; g < n; ++g) phi[a.action[r][g]] = b.action[target][g];
    };
    auto consistent = [&](Index x) {
        for (Index v : fa[x])
            for (Index w : a.total.neighbors(v))
                if (phi[w] != UINT32_MAX && !b.total.adjacent_or_equal(phi[v], phi[w])) return false;
        return true;
    };
    std::vector<std::size_t> choice(order.size(), 0);
    std::size_t pos = 0;
    while (pos < order.size()) {
        const Index x = order[pos];
        bool ok = false;
        while (choice[pos] < fb[x].size() && !ok) {
            assign(x, fb[x][choice[pos]++]);
            ok = consistent(x);
        }
        if (ok) {
            ++pos;
            continue;
        }
        for (Index v : fa[x]) phi[v] = UINT32_MAX;
        choice[pos] = 0;
        if (pos == 0) return std::nullopt;
        --pos;
    }
    for (Index v = 0; v < a.size(); ++v)
        if (phi[v] == UINT32_MAX) return std::nullopt;
    return phi;
}

/// [p, u, k] ↦ [p, u, h_p(u) k] between the bundles of two cocycles, checked on every generator.
inline std::vector<Index> morphism_to_bundle_map(const PlotPresentation& p, const FiniteGroup& g,
                                                 const PlotCocycle& from, const PlotCocycle& to,
                                                 const CocycleMorphism& h, const BundleModel& bf,
                                                 const BundleModel& bt) {
    auto bad = verify_cocycle_morphism(p, g, from, to, h);
    if (!bad.empty()) throw ModelError("invalid cocycle morphism: " + bad.front());
    const ComponentIndex ci(p);
    const std::size_t n = g.order();
    std::vector<Index> map(bf.size(), UINT32_MAX);
    for (Index q = 0; q < p.probes().size(); ++q)
        for (Index u = 0; u < p.probe(q).graph.size(); ++u)
            for (Index k = 0; k < n; ++k) {
                Index src = bf.generator(q, u, k);
                Index dst = bt.generator(q, u, g.mul(h.values[ci.global(p, q, u)], k));
                if (map[src] == UINT32_MAX)
                    map[src] = dst;
                else if (map[src] != dst)
                    throw ModelError("bundle map is not well defined at " + bf.total.name(src));
            }
    std::vector<bool> hit(bt.size(), false);
    for (Index v = 0; v < bf.size(); ++v) {
        if (hit[map[v]]) throw ModelError("bundle map is not injective at " + bf.total.name(v));
        hit[map[v]] = true;
        if (bt.projection[map[v]] != bf.projection[v]) throw ModelError("bundle map moves the base point of " + bf.total.name(v));
        for (Index a = 0; a < n; ++a)
            if (map[bf.action[v][a]] != bt.action[map[v]][a])
                throw ModelError("bundle map is not equivariant at " + bf.total.name(v));
    }
    for (auto [x, y] : bf.total.edges())
        if (!bt.total.adjacent_or_equal(map[x], map[y])) throw ModelError("bundle map tears an edge");
    return map;
}

// ---------------------------------------------------------------------------
// The cocycle groupoid

/// Valid plot cocycles and the gauge group G^{components} acting on them by h·g.
/// Gauge elements are numbered in mixed radix, component 0 most significant.
class CocycleGroupoid {
public:
    static constexpr std::size_t default_cap = 1000000;

    CocycleGroupoid(const PlotPresentation& p, FiniteGroup g, std::size_t cap = default_cap)
        : group_(std::move(g)), components_(ComponentIndex(p).count) {
        const ComponentIndex ci(p);
        const std::size_t n = group_.order();
        // One slot per non-identity map and source component.
        std::vector<std::vector<Index>> slot_of(p.maps().size());
        for (Index m = 0; m < p.maps().size(); ++m) {
            const ProbeMap& pm = p.map(m);
            const ProbeGraph& src = p.probe(pm.from).graph;
            slot_of[m].assign(src.component_count(), UINT32_MAX);
            if (detail::is_identity_map(p, m)) continue;
            for (Index v = 0; v < src.size(); ++v) {
                Index c = src.component(v);
                if (slot_of[m][c] != UINT32_MAX) continue;
                slot_of[m][c] = static_cast<Index>(slots_.size());
                slots_.push_back({m, c, ci.offset[pm.from] + c, ci.global(p, pm.to, pm.vertex_map[v])});
            }
        }
        Integer candidates = 1, gauge = 1;
        for (std::size_t s = 0; s < slots_.size(); ++s) candidates *= n;
        for (std::size_t c = 0; c < components_; ++c) gauge *= n;
        if (candidates > cap)
            throw ResourceLimit("cocycle enumeration needs " + candidates.str() + " candidates, over the cap of " +
                                std::to_string(cap) + "; restrict to a subgroupoid");
        if (gauge > cap)
            throw ResourceLimit("gauge group has " + gauge.str() + " elements, over the cap of " + std::to_string(cap));
        gauge_order_ = static_cast<std::size_t>(gauge);
        // Composition law as slot triples: label(hf) = label(h) · label(f), identities contributing e.
        struct Law {
            Index hf, h, f;  // slots, UINT32_MAX for an identity factor
        };
        std::vector<Law> laws;
        const FinCategory cat = p.category();
        for (Index f = 0; f < p.maps().size(); ++f) {
            const ProbeMap& pf = p.map(f);
            const ProbeGraph& src = p.probe(pf.from).graph;
            for (Index h : cat.out_arrows(pf.to)) {
                Index hf = p.compose(h, f);
                for (Index v = 0; v < src.size(); ++v) {
                    Index c = src.component(v), w = pf.vertex_map[v];
                    Law law{slot_of[hf][c], slot_of[h][p.probe(pf.to).graph.component(w)], slot_of[f][c]};
                    if (law.hf == UINT32_MAX && law.h == UINT32_MAX && law.f == UINT32_MAX) continue;
                    laws.push_back(law);
                }
            }
        }
        std::sort(laws.begin(), laws.end(), [](const Law& a, const Law& b) {
            return std::tie(a.hf, a.h, a.f) < std::tie(b.hf, b.h, b.f);
        });
        laws.erase(std::unique(laws.begin(), laws.end(),
                               [](const Law& a, const Law& b) { return std::tie(a.hf, a.h, a.f) == std::tie(b.hf, b.h, b.f); }),
                   laws.end());
        auto label = [&](const std::vector<Index>& x, Index slot) { return slot == UINT32_MAX ? group_.unit() : x[slot]; };
        std::vector<Index> x(slots_.size(), 0);
        const std::size_t total = static_cast<std::size_t>(candidates);
        for (std::size_t t = 0; t < total; ++t) {
            bool ok = true;
            for (const Law& law : laws)
                if (label(x, law.hf) != group_.mul(label(x, law.h), label(x, law.f))) {
                    ok = false;
                    break;
                }
            if (ok) {
                index_.emplace(x, static_cast<Index>(objects_.size()));
                objects_.push_back(x);
            }
            for (std::size_t s = slots_.size(); s-- > 0;) {
                if (++x[s] < n) break;
                x[s] = 0;
            }
        }
        slot_of_ = std::move(slot_of);
        verify_laws(p);
    }

    const FiniteGroup& group() const { return group_; }
    std::size_t object_count() const { return objects_.size(); }
    std::size_t component_count() const { return components_; }
    std::size_t gauge_order() const { return gauge_order_; }
    std::size_t slot_count() const { return slots_.size(); }

    /// The full cocycle of object o, identities and composites included.
    PlotCocycle cocycle(const PlotPresentation& p, Index o) const {
        PlotCocycle c = trivial_cocycle(p, group_);
        for (Index m = 0; m < slot_of_.size(); ++m)
            for (Index k = 0; k < slot_of_[m].size(); ++k)
                if (slot_of_[m][k] != UINT32_MAX) c.labels[m][k] = objects_[o][slot_of_[m][k]];
        return c;
    }

    std::optional<Index> find(const PlotCocycle& c) const {
        std::vector<Index> x(slots_.size());
        for (Index s = 0; s < slots_.size(); ++s) x[s] = c.labels[slots_[s].map][slots_[s].component];
        auto it = index_.find(x);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    CocycleMorphism gauge_element(std::size_t idx) const {
        CocycleMorphism h;
        h.values.assign(components_, 0);
        for (std::size_t c = components_; c-- > 0; idx /= group_.order()) h.values[c] = static_cast<Index>(idx % group_.order());
        return h;
    }

    std::size_t gauge_index(const CocycleMorphism& h) const {
        std::size_t idx = 0;
        for (Index v : h.values) idx = idx * group_.order() + v;
        return idx;
    }

    /// Pointwise product (h'·h)_c = h'_c h_c.
    CocycleMorphism gauge_mul(const CocycleMorphism& later, const CocycleMorphism& first) const {
        CocycleMorphism out = first;
        for (std::size_t c = 0; c < components_; ++c) out.values[c] = group_.mul(later.values[c], first.values[c]);
        return out;
    }

    /// h·o, or nullopt when the transformed labels are not a cocycle.
    std::optional<Index> act(const CocycleMorphism& h, Index o) const {
        std::vector<Index> y(slots_.size());
        for (Index s = 0; s < slots_.size(); ++s)
            y[s] = group_.mul(group_.mul(h.values[slots_[s].to_component], objects_[o][s]),
                              group_.inverse(h.values[slots_[s].from_component]));
        auto it = index_.find(y);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    /// Gauge elements supported on one component; they generate the gauge group.
    std::vector<CocycleMorphism> generators() const {
        std::vector<CocycleMorphism> out;
        for (std::size_t c = 0; c < components_; ++c)
            for (Index a = 0; a < group_.order(); ++a) {
                if (a == group_.unit()) continue;
                CocycleMorphism h;
                h.values.assign(components_, group_.unit());
                h.values[c] = a;
                out.push_back(std::move(h));
            }
        return out;
    }

    /// Some morphism a -> b, by exhaustive search over the gauge group.
    std::optional<CocycleMorphism> find_morphism(Index a, Index b) const {
        for (std::size_t i = 0; i < gauge_order_; ++i) {
            auto h = gauge_element(i);
            if (act(h, a) == b) return h;
        }
        return std::nullopt;
    }

    /// Groupoid-law failures found at construction, and whether every triple was checked.
    const std::vector<std::string>& law_violations() const { return violations_; }
    bool laws_exhaustive() const { return laws_exhaustive_; }

    /// The category on all objects with arrows (o, h) for h in a subgroup given by gauge indices.
    FinCategory category(std::vector<std::size_t> subgroup = {}) const;

private:
    struct Slot {
        Index map, component;          // map and component of its source probe
        Index from_component, to_component;  // global components of x and f(x)
    };

    void verify_laws(const PlotPresentation& p);

    FiniteGroup group_;
    std::size_t components_ = 0;
    std::size_t gauge_order_ = 1;
    std::vector<Slot> slots_;
    std::vector<std::vector<Index>> slot_of_;
    std::vector<std::vector<Index>> objects_;
    std::map<std::vector<Index>, Index> index_;
    std::vector<std::string> violations_;
    bool laws_exhaustive_ = false;
};

inline CocycleGroupoid cocycle_groupoid(const PlotPresentation& p, const FiniteGroup& g,
                                        std::size_t cap = CocycleGroupoid::default_cap) {
    return CocycleGroupoid(p, g, cap);
}

inline void CocycleGroupoid::verify_laws(const PlotPresentation& p) {
    const std::size_t objects = objects_.size();
    laws_exhaustive_ = static_cast<double>(objects) * gauge_order_ * gauge_order_ <= 2e6;
    std::vector<CocycleMorphism> hs;
    if (laws_exhaustive_)
        for (std::size_t i = 0; i < gauge_order_; ++i) hs.push_back(gauge_element(i));
    else
        hs = generators();
    CocycleMorphism e;
    e.values.assign(components_, group_.unit());
    const bool check_naturality = static_cast<double>(objects) * hs.size() <= 1e4;
    for (Index o = 0; o < objects; ++o) {
        if (act(e, o) != o) violations_.push_back("the unit gauge element moves object " + std::to_string(o));
        for (const auto& h : hs) {
            auto r = act(h, o);
            if (!r) {
                violations_.push_back("gauge element " + std::to_string(gauge_index(h)) + " takes object " +
                                      std::to_string(o) + " out of the cocycles");
                continue;
            }
            if (check_naturality && !verify_cocycle_morphism(p, group_, cocycle(p, o), cocycle(p, *r), h).empty())
                violations_.push_back("arrow (" + std::to_string(o) + ", " + std::to_string(gauge_index(h)) +
                                      ") is not a map of cocycles");
            for (const auto& h2 : hs)
                if (act(h2, *r) != act(gauge_mul(h2, h), o))
                    violations_.push_back("composition fails at object " + std::to_string(o));
        }
        if (violations_.size() > 20) break;
    }
}

inline FinCategory CocycleGroupoid::category(std::vector<std::size_t> subgroup) const {
    if (subgroup.empty())
        for (std::size_t i = 0; i < gauge_order_; ++i) subgroup.push_back(i);
    const std::size_t k = subgroup.size();
    auto position = std::make_shared<std::unordered_map<std::size_t, Index>>();
    for (Index i = 0; i < k; ++i) position->emplace(subgroup[i], i);
    CocycleMorphism e;
    e.values.assign(components_, group_.unit());
    if (!position->count(gauge_index(e))) throw ModelError("subgroup does not contain the unit");
    // products[i][j] = position of subgroup[i]·subgroup[j].
    auto products = std::make_shared<std::vector<Index>>(k * k);
    for (Index i = 0; i < k; ++i)
        for (Index j = 0; j < k; ++j) {
            auto it = position->find(gauge_index(gauge_mul(gauge_element(subgroup[i]), gauge_element(subgroup[j]))));
            if (it == position->end()) throw ModelError("gauge subset is not closed under products");
            (*products)[i * k + j] = it->second;
        }
    std::vector<std::string> objects;
    for (Index o = 0; o < objects_.size(); ++o) objects.push_back("g" + std::to_string(o));
    std::vector<FinCategory::Arrow> arrows;
    std::vector<Index> ids;
    const Index unit_pos = position->at(gauge_index(e));
    for (Index o = 0; o < objects_.size(); ++o) {
        ids.push_back(static_cast<Index>(o * k + unit_pos));
        for (Index i = 0; i < k; ++i) {
            auto t = act(gauge_element(subgroup[i]), o);
            if (!t) throw ModelError("gauge element leaves the cocycles");
            arrows.push_back({"h" + std::to_string(subgroup[i]) + "@g" + std::to_string(o), o, *t});
        }
    }
    return FinCategory(std::move(objects), std::move(arrows), std::move(ids), [products, k](Index later, Index first) {
        return static_cast<Index>((first / k) * k + (*products)[(later % k) * k + first % k]);
    });
}

// ---------------------------------------------------------------------------
// Classification

struct GaugeGroupSummary {
    std::size_t order = 0;
    bool abelian = false;
    std::optional<FgAbGroup> structure;  // invariant factors when abelian
    std::vector<CocycleMorphism> elements;
};

struct BundleClass {
    Index representative = 0;  // object index, lexicographically least labels in the class
    PlotCocycle cocycle;
    std::size_t size = 0;
    GaugeGroupSummary gauge;
};

struct Classification {
    std::size_t object_count = 0;
    std::size_t gauge_order = 0;
    std::vector<BundleClass> classes;
    std::vector<std::string> law_violations;
    bool laws_exhaustive = false;
    bool bijection_verified = false;
    std::string bijection_scope;  // "all cocycles" or "representatives"
    std::vector<std::string> problems;
};

namespace detail {

/// Invariant factors of a finite abelian group from the orders of its elements.
inline FgAbGroup abelian_structure(const std::vector<std::size_t>& element_orders) {
    const std::size_t n = element_orders.size();
    std::vector<Integer> cyclic;
    std::size_t rest = n;
    for (std::size_t prime = 2; rest > 1; ++prime) {
        if (rest % prime) continue;
        while (rest % prime == 0) rest /= prime;
        // at_least[k] = number of cyclic p-factors of exponent >= k.
        std::vector<std::size_t> at_least{0};
        std::size_t previous = 1, power = 1;
        while (true) {
            power *= prime;
            std::size_t count = 0;
            for (auto o : element_orders)
                if (power % o == 0) ++count;
            std::size_t ratio = count / previous, e = 0;
            while (ratio > 1) ratio /= prime, ++e;
            if (e == 0) break;
            at_least.push_back(e);
            previous = count;
        }
        for (std::size_t k = 1; k < at_least.size(); ++k) {
            std::size_t exact = at_least[k] - (k + 1 < at_least.size() ? at_least[k + 1] : 0);
            Integer q = 1;
            for (std::size_t t = 0; t < k; ++t) q *= prime;
            for (std::size_t t = 0; t < exact; ++t) cyclic.push_back(q);
        }
    }
    return FgAbGroup::from_cyclic_orders(cyclic);
}

}  // namespace detail

inline GaugeGroupSummary summarize_gauge_group(const CocycleGroupoid& cg, std::vector<CocycleMorphism> elements) {
    GaugeGroupSummary s;
    s.order = elements.size();
    s.abelian = true;
    for (std::size_t i = 0; i < elements.size() && s.abelian; ++i)
        for (std::size_t j = i + 1; j < elements.size(); ++j)
            if (cg.gauge_mul(elements[i], elements[j]) != cg.gauge_mul(elements[j], elements[i])) {
                s.abelian = false;
                break;
            }
    if (s.abelian) {
        CocycleMorphism e;
        e.values.assign(cg.component_count(), cg.group().unit());
        std::vector<std::size_t> orders;
        for (const auto& h : elements) {
            std::size_t o = 1;
            for (CocycleMorphism x = h; x != e; x = cg.gauge_mul(h, x)) ++o;
            orders.push_back(o);
        }
        s.structure = detail::abelian_structure(orders);
    }
    s.elements = std::move(elements);
    return s;
}

/// Orbits of the cocycle groupoid with gauge groups; every cocycle's bundle is matched to its
/// class representative through the induced bundle map, and representatives are checked pairwise
/// non-isomorphic as bundles.
inline Classification classify_bundles(const PlotPresentation& p, const CocycleGroupoid& cg,
                                       std::size_t full_check_limit = 5000) {
    Classification out;
    const FiniteGroup& g = cg.group();
    out.object_count = cg.object_count();
    out.gauge_order = cg.gauge_order();
    out.law_violations = cg.law_violations();
    out.laws_exhaustive = cg.laws_exhaustive();
    const auto gens = cg.generators();

    // Orbits by breadth-first search from the least unvisited object, recording a transport h with h·rep = o.
    std::vector<Index> orbit(cg.object_count(), UINT32_MAX);
    std::vector<CocycleMorphism> transport(cg.object_count());
    CocycleMorphism e;
    e.values.assign(cg.component_count(), g.unit());
    for (Index r = 0; r < cg.object_count(); ++r) {
        if (orbit[r] != UINT32_MAX) continue;
        const Index cls = static_cast<Index>(out.classes.size());
        BundleClass bc;
        bc.representative = r;
        bc.cocycle = cg.cocycle(p, r);
        std::vector<Index> queue{r};
        orbit[r] = cls;
        transport[r] = e;
        for (std::size_t head = 0; head < queue.size(); ++head) {
            const Index o = queue[head];
            for (const auto& s : gens) {
                auto t = cg.act(s, o);
                if (!t) {
                    out.problems.push_back("a gauge generator leaves the cocycles at object " + std::to_string(o));
                    continue;
                }
                if (orbit[*t] != UINT32_MAX) continue;
                orbit[*t] = cls;
                transport[*t] = cg.gauge_mul(s, transport[o]);
                queue.push_back(*t);
            }
        }
        bc.size = queue.size();
        std::vector<CocycleMorphism> stabilizer;
        for (std::size_t i = 0; i < cg.gauge_order(); ++i) {
            auto h = cg.gauge_element(i);
            if (cg.act(h, r) == r) stabilizer.push_back(std::move(h));
        }
        bc.gauge = summarize_gauge_group(cg, std::move(stabilizer));
        out.classes.push_back(std::move(bc));
    }

    // Both sides of the bijection: bundles of distinct classes are not isomorphic, and every
    // cocycle's bundle is isomorphic to its representative's through the transport.
    std::vector<BundleModel> reps;
    for (const auto& c : out.classes) reps.push_back(bundle_from_plot_cocycle(p, g, c.cocycle));
    for (std::size_t a = 0; a < reps.size(); ++a)
        for (std::size_t b = a + 1; b < reps.size(); ++b)
            if (find_bundle_isomorphism(reps[a], reps[b], p.points().size()))
                out.problems.push_back("classes " + std::to_string(a) + " and " + std::to_string(b) +
                                       " have isomorphic bundles");
    const bool all = cg.object_count() <= full_check_limit;
    out.bijection_scope = all ? "all cocycles" : "representatives";
    if (all) {
        for (Index o = 0; o < cg.object_count(); ++o) {
            const auto& cls = out.classes[orbit[o]];
            PlotCocycle target = cg.cocycle(p, o);
            try {
                morphism_to_bundle_map(p, g, cls.cocycle, target, transport[o], reps[orbit[o]],
                                       bundle_from_plot_cocycle(p, g, target));
            } catch (const ModelError& err) {
                out.problems.push_back("object " + std::to_string(o) + ": " + err.what());
            }
        }
    }
    for (const auto& b : reps)
        if (!verify_principal(p, b).empty()) out.problems.push_back("a representative bundle is not principal");
    out.bijection_verified = out.problems.empty();
    return out;
}

inline Classification classify_bundles(const PlotPresentation& p, const FiniteGroup& g,
                                       std::size_t cap = CocycleGroupoid::default_cap) {
    return classify_bundles(p, CocycleGroupoid(p, g, cap));
}

inline nlohmann::ordered_json classification_to_json(const PlotPresentation& p, const Classification& c,
                                                     const FiniteGroup& g) {
    nlohmann::ordered_json j;
    j["report"] = "classify";
    j["group_order"] = g.order();
    j["cocycles"] = c.object_count;
    j["gauge_order"] = c.gauge_order;
    j["classes"] = nlohmann::ordered_json::array();
    for (const auto& bc : c.classes) {
        nlohmann::ordered_json cj;
        cj["representative"] = cocycle_to_json(p, g, bc.cocycle)["labels"];
        cj["size"] = bc.size;
        cj["gauge_group_order"] = bc.gauge.order;
        cj["gauge_group_abelian"] = bc.gauge.abelian;
        cj["gauge_group"] = bc.gauge.structure ? nlohmann::ordered_json(bc.gauge.structure->to_string()) : nullptr;
        j["classes"].push_back(std::move(cj));
    }
    j["groupoid_laws"] = c.law_violations.empty() ? "verified" : "violated";
    j["groupoid_law_scope"] = c.laws_exhaustive ? "exhaustive" : "generators";
    j["bijection_verified"] = c.bijection_verified;
    j["bijection_scope"] = c.bijection_scope;
    j["problems"] = c.problems;
    return j;
}

}  // namespace diffcech
