/**
 * Plot presentations: a finite point set X, probes given as reflexive graphs
 * labelled by X, and graph maps between probes that commute with the labels.
 *
 * Declared maps are kept as given. Loading adds the missing identities and
 * closes the morphism set under composition; generated maps are flagged so
 * that saving writes back only what was declared.
 */
#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <json.hpp>

#include "category.hpp"
#include "errors.hpp"
#include "probe_graph.hpp"

namespace diffcech {

struct Probe {
    std::string id;
    ProbeGraph graph;
    std::vector<Index> to_space;  // label of each vertex, an index into the point set

    friend bool operator==(const Probe&, const Probe&) = default;
};

struct ProbeMap {
    std::string id;
    Index from = 0;
    Index to = 0;
    std::vector<Index> vertex_map;
    bool generated = false;  // identity or composite added by closure

    friend bool operator==(const ProbeMap&, const ProbeMap&) = default;
};

struct PresentationViolation {
    std::string kind;
    std::string message;
};

class PlotPresentation {
public:
    static constexpr std::size_t default_morphism_cap = 10000;

    PlotPresentation() = default;

    /// Validates references, adds identities and closes under composition.
    PlotPresentation(std::vector<std::string> points, std::vector<Probe> probes, std::vector<ProbeMap> maps,
                     std::size_t morphism_cap = default_morphism_cap)
        : points_(std::move(points)), probes_(std::move(probes)) {
        for (std::size_t i = 0; i < points_.size(); ++i)
            if (!point_index_.emplace(points_[i], static_cast<Index>(i)).second)
                throw MalformedInput("duplicate point '" + points_[i] + "'");
        for (std::size_t p = 0; p < probes_.size(); ++p) {
            const Probe& pr = probes_[p];
            if (!probe_index_.emplace(pr.id, static_cast<Index>(p)).second)
                throw MalformedInput("duplicate probe id '" + pr.id + "'");
            if (pr.graph.size() == 0) throw MalformedInput("probe '" + pr.id + "' has no vertices");
            if (pr.to_space.size() != pr.graph.size())
                throw MalformedInput("probe '" + pr.id + "' must label every vertex");
            for (Index l : pr.to_space)
                if (l >= points_.size()) throw MalformedInput("probe '" + pr.id + "' labels a vertex off the point set");
        }
        std::map<std::string, int> ids;
        for (auto& m : maps) {
            if (!ids.emplace(m.id, 0).second) throw MalformedInput("duplicate map id '" + m.id + "'");
            if (m.from >= probes_.size() || m.to >= probes_.size())
                throw MalformedInput("map '" + m.id + "' refers to an unknown probe");
            if (m.vertex_map.size() != probes_[m.from].graph.size())
                throw MalformedInput("map '" + m.id + "' must send every vertex of its source");
            for (Index v : m.vertex_map)
                if (v >= probes_[m.to].graph.size()) throw MalformedInput("map '" + m.id + "' hits an unknown vertex");
            if (!add_map(std::move(m)))
                throw MalformedInput("map '" + maps_.back().id + "' duplicates an earlier map");
        }
        identity_.assign(probes_.size(), 0);
        for (Index p = 0; p < probes_.size(); ++p) {
            std::vector<Index> id(probes_[p].graph.size());
            for (Index v = 0; v < id.size(); ++v) id[v] = v;
            auto found = find_map(p, p, id);
            if (found) {
                identity_[p] = *found;
            } else {
                identity_[p] = static_cast<Index>(maps_.size());
                add_map({"id_" + probes_[p].id, p, p, std::move(id), true});
            }
        }
        close_under_composition(morphism_cap);
    }

    const std::vector<std::string>& points() const { return points_; }
    const std::vector<Probe>& probes() const { return probes_; }
    const std::vector<ProbeMap>& maps() const { return maps_; }
    const Probe& probe(Index p) const { return probes_[p]; }
    const ProbeMap& map(Index m) const { return maps_[m]; }
    Index identity(Index p) const { return identity_[p]; }

    Index point_index(const std::string& name) const {
        auto it = point_index_.find(name);
        if (it == point_index_.end()) throw MalformedInput("unknown point '" + name + "'");
        return it->second;
    }

    Index probe_index(const std::string& id) const {
        auto it = probe_index_.find(id);
        if (it == probe_index_.end()) throw MalformedInput("unknown probe '" + id + "'");
        return it->second;
    }

    /// Morphism with the given endpoints and vertex map, if present.
    std::optional<Index> find_map(Index from, Index to, const std::vector<Index>& vertex_map) const {
        auto it = by_data_.find(std::make_tuple(from, to, vertex_map));
        if (it == by_data_.end()) return std::nullopt;
        return it->second;
    }

    /// g ∘ f on vertex maps; f must end where g starts.
    std::vector<Index> composite_data(Index g, Index f) const {
        const auto& fm = maps_[f].vertex_map;
        const auto& gm = maps_[g].vertex_map;
        std::vector<Index> out(fm.size());
        for (std::size_t v = 0; v < fm.size(); ++v) out[v] = gm[fm[v]];
        return out;
    }

    Index compose(Index g, Index f) const {
        if (maps_[f].to != maps_[g].from) throw ModelError("composing non-composable probe maps");
        auto r = find_map(maps_[f].from, maps_[g].to, composite_data(g, f));
        if (!r) throw ModelError("probe maps are not closed under composition");
        return *r;
    }

    /// The probe category: objects are probes, arrows are all (closed) maps.
    FinCategory category() const {
        std::vector<std::string> objects;
        for (const auto& p : probes_) objects.push_back(p.id);
        std::vector<FinCategory::Arrow> arrows;
        for (const auto& m : maps_) arrows.push_back({m.id, m.from, m.to});
        auto self = std::make_shared<const PlotPresentation>(*this);
        return FinCategory(std::move(objects), std::move(arrows), identity_,
                           [self](Index g, Index f) { return self->compose(g, f); });
    }

    friend bool operator==(const PlotPresentation& a, const PlotPresentation& b) {
        return a.points_ == b.points_ && a.probes_ == b.probes_ && a.maps_ == b.maps_;
    }

private:
    using DataKey = std::tuple<Index, Index, std::vector<Index>>;

    bool add_map(ProbeMap m) {
        DataKey key{m.from, m.to, m.vertex_map};
        maps_.push_back(std::move(m));
        return by_data_.emplace(std::move(key), static_cast<Index>(maps_.size() - 1)).second;
    }

    void close_under_composition(std::size_t cap) {
        // Worklist over pairs (g, f); every new map is paired with all existing ones.
        std::vector<std::vector<Index>> into(probes_.size()), outof(probes_.size());
        for (Index m = 0; m < maps_.size(); ++m) {
            into[maps_[m].to].push_back(m);
            outof[maps_[m].from].push_back(m);
        }
        for (std::size_t next = 0; next < maps_.size(); ++next) {
            const Index m = static_cast<Index>(next);
            auto try_pair = [&](Index g, Index f) {
                auto data = composite_data(g, f);
                if (find_map(maps_[f].from, maps_[g].to, data)) return;
                if (maps_.size() >= cap)
                    throw ResourceLimit("morphism closure reached " + std::to_string(maps_.size() + 1) +
                                        " maps, over the cap of " + std::to_string(cap));
                Index from = maps_[f].from, to = maps_[g].to;
                add_map({maps_[g].id + "∘" + maps_[f].id, from, to, std::move(data), true});
                Index n = static_cast<Index>(maps_.size() - 1);
                into[to].push_back(n);
                outof[from].push_back(n);
            };
            // Indices are copied since try_pair may grow the lists.
            for (std::size_t t = 0; t < outof[maps_[m].to].size(); ++t) try_pair(outof[maps_[m].to][t], m);
            for (std::size_t t = 0; t < into[maps_[m].from].size(); ++t) try_pair(m, into[maps_[m].from][t]);
        }
    }

    std::vector<std::string> points_;
    std::vector<Probe> probes_;
    std::vector<ProbeMap> maps_;
    std::vector<Index> identity_;
    std::map<std::string, Index> point_index_, probe_index_;
    std::map<DataKey, Index> by_data_;
};

/// Checks labels, graph-map conditions, identities and closure; one entry per violation.
inline std::vector<PresentationViolation> validate_presentation(const PlotPresentation& p) {
    std::vector<PresentationViolation> out;
    std::vector<char> covered(p.points().size(), 0);
    for (const auto& pr : p.probes())
        for (Index l : pr.to_space) covered[l] = 1;
    for (std::size_t x = 0; x < covered.size(); ++x)
        if (!covered[x]) out.push_back({"not-surjective", "point '" + p.points()[x] + "' is not hit by any probe"});
    for (const auto& m : p.maps()) {
        const Probe& a = p.probe(m.from);
        const Probe& b = p.probe(m.to);
        for (Index v = 0; v < m.vertex_map.size(); ++v) {
            Index w = m.vertex_map[v];
            if (a.to_space[v] != b.to_space[w])
                out.push_back({"label-commutation", "map '" + m.id + "' sends " + a.id + ":" + a.graph.name(v) +
                                                        " (over " + p.points()[a.to_space[v]] + ") to " + b.id +
                                                        ":" + b.graph.name(w) + " (over " +
                                                        p.points()[b.to_space[w]] + ")"});
        }
        for (auto [u, v] : a.graph.edges())
            if (!b.graph.adjacent_or_equal(m.vertex_map[u], m.vertex_map[v]))
                out.push_back({"not-graph-map", "map '" + m.id + "' tears the edge " + a.graph.name(u) + "-" +
                                                    a.graph.name(v) + " of " + a.id});
        std::vector<Index> image_component(a.graph.component_count(), UINT32_MAX);
        for (Index v = 0; v < m.vertex_map.size(); ++v) {
            Index c = a.graph.component(v), target = b.graph.component(m.vertex_map[v]);
            if (image_component[c] == UINT32_MAX) image_component[c] = target;
            if (image_component[c] != target)
                out.push_back({"component-split", "map '" + m.id + "' spreads one component of " + a.id +
                                                      " over several components of " + b.id});
        }
    }
    for (Index q = 0; q < p.probes().size(); ++q) {
        const auto& id = p.map(p.identity(q));
        bool ok = id.from == q && id.to == q;
        for (Index v = 0; ok && v < id.vertex_map.size(); ++v) ok = id.vertex_map[v] == v;
        if (!ok) out.push_back({"identity", "probe '" + p.probe(q).id + "' has no identity map"});
    }
    for (Index f = 0; f < p.maps().size(); ++f)
        for (Index g = 0; g < p.maps().size(); ++g)
            if (p.map(f).to == p.map(g).from && !p.find_map(p.map(f).from, p.map(g).to, p.composite_data(g, f)))
                out.push_back({"closure", "composite of '" + p.map(g).id + "' after '" + p.map(f).id + "' is missing"});
    return out;
}

// ---- JSON format -------------------------------------------------------------

namespace detail {

inline const nlohmann::ordered_json& require(const nlohmann::ordered_json& j, const char* key, const std::string& where) {
    if (!j.is_object() || !j.contains(key)) throw MalformedInput(where + ": missing key '" + key + "'");
    return j.at(key);
}

inline const nlohmann::ordered_json& require_array(const nlohmann::ordered_json& j, const char* key,
                                                   const std::string& where) {
    const auto& a = require(j, key, where);
    if (!a.is_array()) throw MalformedInput(where + ": '" + key + "' must be an array");
    return a;
}

inline std::string as_string(const nlohmann::ordered_json& j, const std::string& where) {
    if (!j.is_string()) throw MalformedInput(where + ": expected a string");
    return j.get<std::string>();
}

}  // namespace detail

inline PlotPresentation presentation_from_json(const nlohmann::ordered_json& j,
                                               std::size_t morphism_cap = PlotPresentation::default_morphism_cap) {
    using detail::as_string;
    using detail::require;
    using detail::require_array;
    std::vector<std::string> points;
    for (const auto& x : require_array(j, "points", "presentation")) points.push_back(as_string(x, "points"));
    std::map<std::string, Index> point_of;
    for (std::size_t i = 0; i < points.size(); ++i) point_of.emplace(points[i], static_cast<Index>(i));

    std::vector<Probe> probes;
    std::map<std::string, Index> probe_of;
    for (const auto& pj : require_array(j, "probes", "presentation")) {
        std::string id = as_string(require(pj, "id", "probe"), "probe id");
        std::string where = "probe '" + id + "'";
        std::vector<std::string> vertices;
        for (const auto& v : require_array(pj, "vertices", where)) vertices.push_back(as_string(v, where));
        std::vector<std::pair<std::string, std::string>> edges;
        for (const auto& e : require_array(pj, "edges", where)) {
            if (!e.is_array() || e.size() != 2) throw MalformedInput(where + ": edges are pairs of vertices");
            edges.emplace_back(as_string(e[0], where), as_string(e[1], where));
        }
        Probe pr{id, ProbeGraph(vertices, edges), std::vector<Index>(vertices.size(), UINT32_MAX)};
        const auto& ts = require(pj, "to_space", where);
        if (!ts.is_object()) throw MalformedInput(where + ": to_space must be an object");
        for (const auto& [v, x] : ts.items()) {
            if (!pr.graph.contains(v)) throw MalformedInput(where + ": to_space names unknown vertex '" + v + "'");
            auto it = point_of.find(as_string(x, where));
            if (it == point_of.end()) throw MalformedInput(where + ": to_space names unknown point");
            pr.to_space[pr.graph.index_of(v)] = it->second;
        }
        for (std::size_t v = 0; v < vertices.size(); ++v)
            if (pr.to_space[v] == UINT32_MAX) throw MalformedInput(where + ": vertex '" + vertices[v] + "' has no point");
        probe_of.emplace(id, static_cast<Index>(probes.size()));
        probes.push_back(std::move(pr));
    }

    std::vector<ProbeMap> maps;
    for (const auto& mj : require_array(j, "maps", "presentation")) {
        std::string id = as_string(require(mj, "id", "map"), "map id");
        std::string where = "map '" + id + "'";
        auto lookup = [&](const char* key) {
            auto it = probe_of.find(as_string(require(mj, key, where), where));
            if (it == probe_of.end()) throw MalformedInput(where + ": unknown probe in '" + key + "'");
            return it->second;
        };
        ProbeMap m{id, lookup("from"), lookup("to"), {}, false};
        const ProbeGraph& a = probes[m.from].graph;
        const ProbeGraph& b = probes[m.to].graph;
        m.vertex_map.assign(a.size(), UINT32_MAX);
        const auto& vm = require(mj, "vertex_map", where);
        if (!vm.is_object()) throw MalformedInput(where + ": vertex_map must be an object");
        for (const auto& [v, w] : vm.items()) {
            std::string target = as_string(w, where);
            if (!a.contains(v) || !b.contains(target)) throw MalformedInput(where + ": vertex_map names unknown vertex");
            m.vertex_map[a.index_of(v)] = b.index_of(target);
        }
        for (std::size_t v = 0; v < a.size(); ++v)
            if (m.vertex_map[v] == UINT32_MAX) throw MalformedInput(where + ": vertex '" + a.name(static_cast<Index>(v)) + "' is not mapped");
        maps.push_back(std::move(m));
    }
    return PlotPresentation(std::move(points), std::move(probes), std::move(maps), morphism_cap);
}

/// Canonical form: declared maps only, objects keyed in vertex order.
inline nlohmann::ordered_json presentation_to_json(const PlotPresentation& p) {
    nlohmann::ordered_json j;
    j["points"] = p.points();
    j["probes"] = nlohmann::ordered_json::array();
    for (const auto& pr : p.probes()) {
        nlohmann::ordered_json pj;
        pj["id"] = pr.id;
        pj["vertices"] = pr.graph.vertices();
        pj["edges"] = nlohmann::ordered_json::array();
        for (auto [a, b] : pr.graph.edges()) pj["edges"].push_back({pr.graph.name(a), pr.graph.name(b)});
        pj["to_space"] = nlohmann::ordered_json::object();
        for (Index v = 0; v < pr.graph.size(); ++v) pj["to_space"][pr.graph.name(v)] = p.points()[pr.to_space[v]];
        j["probes"].push_back(std::move(pj));
    }
    j["maps"] = nlohmann::ordered_json::array();
    for (const auto& m : p.maps()) {
        if (m.generated) continue;
        nlohmann::ordered_json mj;
        mj["id"] = m.id;
        mj["from"] = p.probe(m.from).id;
        mj["to"] = p.probe(m.to).id;
        mj["vertex_map"] = nlohmann::ordered_json::object();
        const auto& a = p.probe(m.from).graph;
        const auto& b = p.probe(m.to).graph;
        for (Index v = 0; v < a.size(); ++v) mj["vertex_map"][a.name(v)] = b.name(m.vertex_map[v]);
        j["maps"].push_back(std::move(mj));
    }
    return j;
}

inline PlotPresentation parse_presentation(const std::string& text,
                                           std::size_t morphism_cap = PlotPresentation::default_morphism_cap) {
    nlohmann::ordered_json j;
    try {
        j = nlohmann::ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw MalformedInput(std::string("presentation is not valid JSON: ") + e.what());
    }
    return presentation_from_json(j, morphism_cap);
}

inline std::string dump_presentation(const PlotPresentation& p) { return presentation_to_json(p).dump(2) + "\n"; }

}  // namespace diffcech
