/**
 * Shared fixture presentations, also shipped as JSON under fixtures/.
 */
#pragma once

#include <string>
#include <vector>

#include "presentation.hpp"
#include "star_cover.hpp"

namespace diffcech::fixtures {

namespace detail {

/// Probe whose vertex names are the point names they lie over.
inline Probe labelled_probe(const std::vector<std::string>& points, std::string id,
                            const std::vector<std::string>& vertices,
                            const std::vector<std::pair<std::string, std::string>>& edges) {
    Probe p{std::move(id), ProbeGraph(vertices, edges), {}};
    for (const auto& v : vertices) {
        auto it = std::find(points.begin(), points.end(), v);
        if (it == points.end()) throw MalformedInput("fixture vertex '" + v + "' is not a point");
        p.to_space.push_back(static_cast<Index>(it - points.begin()));
    }
    return p;
}

/// Inclusion of a labelled probe into another, matching vertices by name.
inline ProbeMap inclusion(const std::vector<Probe>& probes, Index from, Index to) {
    ProbeMap m{probes[from].id + "→" + probes[to].id, from, to, {}, false};
    for (const auto& v : probes[from].graph.vertices()) m.vertex_map.push_back(probes[to].graph.index_of(v));
    return m;
}

}  // namespace detail

inline PlotPresentation pt() {
    std::vector<std::string> pts{"x"};
    return PlotPresentation(pts, {detail::labelled_probe(pts, "P", {"x"}, {})}, {});
}

inline PlotPresentation disc2() {
    std::vector<std::string> pts{"a", "b"};
    return PlotPresentation(pts, {detail::labelled_probe(pts, "Pa", {"a"}, {}), detail::labelled_probe(pts, "Pb", {"b"}, {})},
                            {});
}

/// Two arcs U = 0-1-2 and V = 2-3-0 with the point probes P0, P2 witnessing their overlaps.
inline PlotPresentation circ2() {
    std::vector<std::string> pts{"0", "1", "2", "3"};
    std::vector<Probe> probes{detail::labelled_probe(pts, "U", {"0", "1", "2"}, {{"0", "1"}, {"1", "2"}}),
                              detail::labelled_probe(pts, "V", {"2", "3", "0"}, {{"2", "3"}, {"3", "0"}}),
                              detail::labelled_probe(pts, "P0", {"0"}, {}), detail::labelled_probe(pts, "P2", {"2"}, {})};
    std::vector<ProbeMap> maps{detail::inclusion(probes, 2, 0), detail::inclusion(probes, 2, 1),
                               detail::inclusion(probes, 3, 0), detail::inclusion(probes, 3, 1)};
    return PlotPresentation(pts, probes, maps);
}

/// circ2 with P0→U sending 0 to the vertex over 1.
inline PlotPresentation circ2_corrupt() {
    auto good = circ2();
    std::vector<Probe> probes = good.probes();
    std::vector<ProbeMap> maps;
    for (const auto& m : good.maps())
        if (!m.generated) maps.push_back(m);
    maps[0].vertex_map[0] = probes[0].graph.index_of("1");
    return PlotPresentation(good.points(), probes, maps);
}

/// The sub-presentation of circ2 with the arcs only.
inline PlotPresentation circ2_arcs() {
    auto good = circ2();
    return PlotPresentation(good.points(), {good.probe(0), good.probe(1)}, {});
}

/// Four edges A_i = {i, i+1 mod 4} and four point probes, with the eight inclusions.
inline PlotPresentation circ4() {
    std::vector<std::string> pts{"0", "1", "2", "3"};
    std::vector<Probe> probes;
    for (int i = 0; i < 4; ++i) {
        std::string a = pts[i], b = pts[(i + 1) % 4];
        probes.push_back(detail::labelled_probe(pts, "A" + a, {a, b}, {{a, b}}));
    }
    for (int i = 0; i < 4; ++i) probes.push_back(detail::labelled_probe(pts, "P" + pts[i], {pts[i]}, {}));
    std::vector<ProbeMap> maps;
    for (Index i = 0; i < 4; ++i) {
        maps.push_back(detail::inclusion(probes, 4 + i, i));
        maps.push_back(detail::inclusion(probes, 4 + (i + 1) % 4, i));
    }
    return PlotPresentation(pts, probes, maps);
}

inline PlotPresentation sph_oct() { return build_presentation_from_complex(octahedron_boundary()); }

struct NamedFixture {
    std::string name;
    PlotPresentation (*make)();
};

/// Every shipped fixture, under its file stem.
inline std::vector<NamedFixture> all() {
    return {{"pt", pt},       {"disc2", disc2}, {"circ2", circ2},     {"circ2_corrupt", circ2_corrupt},
            {"circ2_arcs", circ2_arcs}, {"circ4", circ4}, {"sph_oct", sph_oct}};
}

}  // namespace diffcech::fixtures
