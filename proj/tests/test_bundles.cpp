// Finite groups, BG and EG, plot and cover cocycles, bundle quotients, principality and classification.
#include <set>

#include <catch_amalgamated.hpp>

#include "diffcech/bundles.hpp"
#include "diffcech/fixtures.hpp"
#include "diffcech/oracles.hpp"

using namespace diffcech;

namespace {

FiniteGroup klein() {
    return parse_group(R"({"elements": ["e", "a", "b", "c"], "unit": "e", "mul": {
        "e,e": "e", "e,a": "a", "e,b": "b", "e,c": "c",
        "a,e": "a", "a,a": "e", "a,b": "c", "a,c": "b",
        "b,e": "b", "b,a": "c", "b,b": "e", "b,c": "a",
        "c,e": "c", "c,a": "b", "c,b": "a", "c,c": "e"}})");
}

std::vector<FiniteGroup> small_groups() {
    std::vector<FiniteGroup> out;
    for (std::size_t n = 1; n <= 6; ++n) out.push_back(FiniteGroup::cyclic(n));
    out.push_back(FiniteGroup::symmetric(3));
    out.push_back(klein());
    return out;
}

Index map_named(const PlotPresentation& p, const std::string& id) {
    for (Index m = 0; m < p.maps().size(); ++m)
        if (p.map(m).id == id) return m;
    throw MalformedInput("no map " + id);
}

PlotCocycle circ2_twisted(const PlotPresentation& p, const FiniteGroup& g, Index tau) {
    auto c = trivial_cocycle(p, g);
    c.labels[map_named(p, "P2→V")][0] = tau;
    return c;
}

std::size_t non_identity_maps(const PlotPresentation& p) {
    std::size_t n = 0;
    for (Index m = 0; m < p.maps().size(); ++m)
        if (p.identity(p.map(m).from) != m) ++n;
    return n;
}

// Two arcs 0-1-2 and 2-3-0 covering the 4-cycle; the overlap {0, 2} has two components.
GraphCover two_patch_circle() {
    ProbeGraph circle({"0", "1", "2", "3"}, std::vector<std::pair<Index, Index>>{{0, 1}, {1, 2}, {2, 3}, {3, 0}});
    return GraphCover(circle, {{0, 1, 2}, {2, 3, 0}});
}

}  // namespace

TEST_CASE("group files", "[bundles][group]") {
    CHECK(parse_group(R"({"cyclic": 4})").order() == 4);
    CHECK(parse_group(R"({"symmetric": 3})").order() == 6);
    auto k = klein();
    CHECK(k.order() == 4);
    CHECK(k.is_abelian());
    CHECK(k.abelianization() == FgAbGroup::from_cyclic_orders({2, 2}));
    auto again = group_from_json(group_to_json(k));
    CHECK(again.names() == k.names());
    for (Index a = 0; a < 4; ++a)
        for (Index b = 0; b < 4; ++b) CHECK(again.mul(a, b) == k.mul(a, b));
    CHECK_THROWS_AS(parse_group(R"({"elements": ["e", "a"], "unit": "e", "mul": {"e,e": "e"}})"), MalformedInput);
    CHECK_THROWS_AS(parse_group(R"({"elements": ["e"], "unit": "x", "mul": {}})"), MalformedInput);
    CHECK_THROWS_AS(parse_group(R"({"elements": ["e", "a"], "unit": "e", "mul": {"e,e": "e", "e,a": "a", "a,e": "a", "a,a": "a"}})"),
                    ModelError);
    CHECK_THROWS_AS(parse_group("[1"), MalformedInput);
}

TEST_CASE("BG, EG and the projection between them", "[bundles][bg]") {
    auto t = FiniteGroup::trivial();
    CHECK(bg_nerve(t, 3) == constant_simplicial_set(1, 3));
    CHECK(eg_nerve(t, 3) == constant_simplicial_set(1, 3));
    auto z2 = FiniteGroup::cyclic(2);
    CHECK(bg_nerve(z2, 2).count(2) == 4);
    for (const auto& g : small_groups()) {
        INFO(g.order());
        auto bg = bg_nerve(g, 3), eg = eg_nerve(g, 3);
        std::size_t power = 1;
        for (std::size_t k = 0; k <= 3; ++k, power *= g.order()) {
            CHECK(bg.count(k) == power);
            CHECK(eg.count(k) == power * g.order());
        }
        CHECK(verify_simplicial_identities(eg).empty());
        CHECK(verify_simplicial_map(eg_to_bg(g, 3), eg, bg).empty());
    }
    auto z3 = FiniteGroup::cyclic(3);
    auto f = eg_to_bg(z3, 1);
    for (Index a = 0; a < 3; ++a)
        for (Index b = 0; b < 3; ++b) CHECK(f.degree[1][a * 3 + b] == (b + 3 - a) % 3);
    SimplicialMap broken = eg_to_bg(z3, 2);
    broken.degree[1][1] = 0;
    CHECK_FALSE(verify_simplicial_map(broken, eg_nerve(z3, 2), bg_nerve(z3, 2)).empty());
}

TEST_CASE("plot cocycle verification", "[bundles][cocycle]") {
    auto p = fixtures::circ2();
    auto z2 = FiniteGroup::cyclic(2);
    CHECK(verify_plot_cocycle(p, z2, trivial_cocycle(p, z2)).empty());
    CHECK(verify_plot_cocycle(p, z2, circ2_twisted(p, z2, 1)).empty());
    auto bad_id = trivial_cocycle(p, z2);
    bad_id.labels[p.identity(0)][0] = 1;
    CHECK_FALSE(verify_plot_cocycle(p, z2, bad_id).empty());

    // A -> B -> C with g∘f generated: labels 1, 1 force the composite to be 0 in Z/2.
    std::vector<Probe> probes;
    for (std::string id : {"A", "B", "C"}) probes.push_back({id, ProbeGraph({"v"}, std::vector<std::pair<Index, Index>>{}), {0}});
    PlotPresentation chain({"x"}, probes, {{"f", 0, 1, {0}, false}, {"g", 1, 2, {0}, false}});
    auto c = parse_cocycle(chain, z2, R"({"labels": {"f": {"0": "1"}, "g": {"0": "1"}}})");
    CHECK(verify_plot_cocycle(chain, z2, c).empty());
    CHECK(c.labels[*chain.find_map(0, 2, {0})][0] == 0);
    c.labels[*chain.find_map(0, 2, {0})][0] = 1;
    auto v = verify_plot_cocycle(chain, z2, c);
    REQUIRE(v.size() == 1);
    CHECK(v[0].find("g after f") != std::string::npos);
    CHECK_THROWS_AS(bundle_from_plot_cocycle(chain, z2, c), ModelError);
}

TEST_CASE("cocycle files", "[bundles][cocycle][json]") {
    auto p = fixtures::circ2();
    auto s3 = FiniteGroup::symmetric(3);
    auto c = circ2_twisted(p, s3, s3.index_of("231"));
    auto j = cocycle_to_json(p, s3, c);
    CHECK(cocycle_from_json(p, s3, j) == c);
    CHECK_THROWS_AS(parse_cocycle(p, s3, R"({"labels": {"P0→U": {"0": "123"}}})"), MalformedInput);
    auto vertexwise = j;
    vertexwise["labels"]["P0→U"] = {{"0", "123"}, {"x", "123"}};
    CHECK_THROWS_AS(cocycle_from_json(p, s3, vertexwise), MalformedInput);
    auto unknown = j;
    unknown["labels"]["P0→W"] = {{"0", "123"}};
    CHECK_THROWS_AS(cocycle_from_json(p, s3, unknown), MalformedInput);
    auto bad_element = j;
    bad_element["labels"]["P0→U"]["0"] = "321x";
    CHECK_THROWS_AS(cocycle_from_json(p, s3, bad_element), MalformedInput);
}

TEST_CASE("bundles from plot cocycles", "[bundles][quotient]") {
    auto p = fixtures::circ2();
    auto z2 = FiniteGroup::cyclic(2);
    auto trivial = bundle_from_plot_cocycle(p, z2, trivial_cocycle(p, z2));
    CHECK(trivial.size() == 8);
    CHECK(trivial.total.component_count() == 2);
    CHECK(verify_principal(p, trivial).empty());
    auto twisted = bundle_from_plot_cocycle(p, z2, circ2_twisted(p, z2, 1));
    CHECK(twisted.size() == 8);
    CHECK(twisted.total.component_count() == 1);
    CHECK(verify_principal(p, twisted).empty());
    CHECK_FALSE(find_bundle_isomorphism(trivial, twisted, 4));

    auto pt = fixtures::pt();
    for (const auto& g : small_groups()) {
        auto b = bundle_from_plot_cocycle(pt, g, trivial_cocycle(pt, g));
        CHECK(b.size() == g.order());
        CHECK(verify_principal(pt, b).empty());
    }

    // Every cocycle on CIRC2 and CIRC4 gives a principal bundle with |X|·|G| elements.
    for (auto make : {fixtures::circ2, fixtures::circ4}) {
        auto q = make();
        for (const auto& g : {FiniteGroup::cyclic(2), FiniteGroup::symmetric(3)}) {
            if (make == fixtures::circ4 && g.order() > 2) continue;
            CocycleGroupoid cg(q, g);
            for (Index o = 0; o < cg.object_count(); ++o) {
                auto b = bundle_from_plot_cocycle(q, g, cg.cocycle(q, o));
                CHECK(b.size() == q.points().size() * g.order());
                auto bad = verify_principal(q, b);
                CHECK(bad.empty());
                if (!bad.empty()) break;
            }
        }
    }
}

TEST_CASE("principality failures carry witnesses", "[bundles][principal]") {
    auto p = fixtures::circ2();
    auto z2 = FiniteGroup::cyclic(2);
    ProbeGraph circle({"0", "1", "2", "3"}, std::vector<std::pair<Index, Index>>{{0, 1}, {1, 2}, {2, 3}, {3, 0}});
    auto product = trivial_bundle(circle, z2);
    CHECK(verify_principal(p, product).empty());

    // A second copy of the point over 0, moved by the action like the first.
    BundleModel doubled = product;
    auto names = doubled.total.vertices();
    names.push_back("extra");
    doubled.total = ProbeGraph(names, doubled.total.edges());
    doubled.projection.push_back(doubled.projection[0]);
    doubled.action.push_back(doubled.action[0]);
    auto v = verify_principal(p, doubled);
    bool shear = false, orbit = false;
    for (const auto& x : v) {
        shear = shear || x.kind == "fiber-product";
        orbit = orbit || x.kind == "orbit";
    }
    CHECK(shear);
    CHECK(orbit);

    BundleModel fixed = product;
    for (auto& row : fixed.action) row.assign(row.size(), row[0]);
    bool free_fail = false;
    for (const auto& x : verify_principal(p, fixed)) free_fail = free_fail || x.kind == "free";
    CHECK(free_fail);
}

TEST_CASE("cover cocycles", "[bundles][cover]") {
    auto z2 = FiniteGroup::cyclic(2);
    auto s3 = FiniteGroup::symmetric(3);
    ProbeGraph path({"a", "b", "c"}, std::vector<std::pair<Index, Index>>{{0, 1}, {1, 2}});
    GraphCover one(path, {{0, 1, 2}});
    auto single = bundle_from_cover_cocycle(one, s3, cover_cocycle(one, s3, {}));
    CHECK(find_bundle_isomorphism(single, trivial_bundle(path, s3), 3));

    auto u = two_patch_circle();
    CHECK(u.overlap_graph(0, 1).component_count() == 2);
    auto trivial = bundle_from_cover_cocycle(u, z2, cover_cocycle(u, z2, {{{0, 1}, {0, 0}}}));
    CHECK(trivial.total.component_count() == 2);
    auto twisted_c = cover_cocycle(u, z2, {{{0, 1}, {0, 1}}});
    auto twisted = bundle_from_cover_cocycle(u, z2, twisted_c);
    CHECK(twisted.total.component_count() == 1);

    auto cp = cover_presentation(u);
    CHECK(validate_presentation(cp).empty());
    for (const auto& c : {cover_cocycle(u, z2, {{{0, 1}, {0, 0}}}), twisted_c}) {
        auto plot = plot_cocycle_from_cover(u, z2, c);
        CHECK(verify_plot_cocycle(cp, z2, plot).empty());
        auto from_plot = bundle_from_plot_cocycle(cp, z2, plot);
        auto from_cover = bundle_from_cover_cocycle(u, z2, c);
        CHECK(verify_principal(cp, from_plot).empty());
        CHECK(verify_principal(cp, from_cover).empty());
        CHECK(find_bundle_isomorphism(from_plot, from_cover, 4));
    }
    CHECK_FALSE(find_bundle_isomorphism(trivial, twisted, 4));

    // Three patches through one vertex: labels a, b, c on the pairs must satisfy g_02 = g_12 g_01.
    ProbeGraph star({"o", "p", "q", "r"}, std::vector<std::pair<Index, Index>>{{0, 1}, {0, 2}, {0, 3}});
    GraphCover three(star, {{0, 1}, {0, 2}, {0, 3}});
    auto good = cover_cocycle(three, s3, {{{0, 1}, {1}}, {{1, 2}, {2}}, {{0, 2}, {s3.mul(2, 1)}}});
    CHECK(verify_cover_cocycle(three, s3, good).empty());
    CHECK(verify_principal(cover_presentation(three), bundle_from_cover_cocycle(three, s3, good)).empty());
    auto bad = cover_cocycle(three, s3, {{{0, 1}, {1}}, {{1, 2}, {2}}, {{0, 2}, {s3.mul(1, 2)}}});
    REQUIRE(s3.mul(1, 2) != s3.mul(2, 1));
    auto v = verify_cover_cocycle(three, s3, bad);
    REQUIRE_FALSE(v.empty());
    CHECK(v[0].find("at o") != std::string::npos);
    CHECK_THROWS_AS(bundle_from_cover_cocycle(three, s3, bad), ModelError);
    CHECK_THROWS_AS(GraphCover(star, {{0, 1}, {2, 3}}), MalformedInput);
}

TEST_CASE("cocycle groupoid", "[bundles][groupoid]") {
    for (const auto& g : small_groups()) {
        CocycleGroupoid cg(fixtures::pt(), g);
        CHECK(cg.object_count() == 1);
        CHECK(cg.gauge_order() == g.order());
        auto cat = cg.category();
        CHECK(cat.arrow_count() == g.order());
        CHECK(verify_category_laws(cat, 2000000, true).empty());
    }
    auto p = fixtures::circ2();
    CocycleGroupoid z2(p, FiniteGroup::cyclic(2));
    CHECK(z2.object_count() == 16);
    CHECK(z2.law_violations().empty());
    CHECK(z2.laws_exhaustive());
    CHECK(verify_category_laws(z2.category(), 2000000, true).empty());
    CocycleGroupoid s3(p, FiniteGroup::symmetric(3));
    CHECK(s3.object_count() == 1296);
    CHECK(s3.law_violations().empty());
    CHECK_THROWS_AS(CocycleGroupoid(fixtures::sph_oct(), FiniteGroup::cyclic(2)), ResourceLimit);
    CHECK_THROWS_AS(CocycleGroupoid(p, FiniteGroup::symmetric(3), 1000), ResourceLimit);
}

TEST_CASE("classification", "[bundles][classify]") {
    auto p = fixtures::circ2();
    auto z2 = classify_bundles(p, FiniteGroup::cyclic(2));
    REQUIRE(z2.classes.size() == 2);
    CHECK(z2.object_count == 16);
    CHECK(z2.bijection_verified);

    auto z3 = classify_bundles(p, FiniteGroup::cyclic(3));
    REQUIRE(z3.classes.size() == 3);
    for (const auto& c : z3.classes) {
        CHECK(c.gauge.order == 3);
        CHECK(c.gauge.structure == FgAbGroup::cyclic(3));
    }

    auto g = FiniteGroup::symmetric(3);
    auto s3 = classify_bundles(p, g);
    REQUIRE(s3.classes.size() == 3);
    CHECK(s3.bijection_verified);
    std::multiset<std::size_t> orders, centralizers;
    for (const auto& c : s3.classes) {
        orders.insert(c.gauge.order);
        // Holonomy around the loop U -> P2 -> V -> P0 -> U, with all maps into U labelled e.
        auto label = [&](const std::string& from, const std::string& to) {
            return c.cocycle.labels[map_named(p, from + "→" + to)][0];
        };
        Index hol = g.mul(g.mul(g.inverse(label("P0", "U")), label("P0", "V")),
                          g.mul(g.inverse(label("P2", "V")), label("P2", "U")));
        std::size_t centralizer = 0;
        for (Index a = 0; a < g.order(); ++a) centralizer += g.mul(a, hol) == g.mul(hol, a);
        centralizers.insert(centralizer);
    }
    CHECK(orders == std::multiset<std::size_t>{2, 3, 6});
    CHECK(orders == centralizers);

    auto d = classify_bundles(fixtures::disc2(), FiniteGroup::cyclic(3));
    REQUIRE(d.classes.size() == 1);
    CHECK(d.classes[0].gauge.order == 9);
    CHECK(d.classes[0].gauge.structure == FgAbGroup::from_cyclic_orders({3, 3}));

    std::size_t total = 0;
    for (const auto& c : s3.classes) total += c.size;
    CHECK(total == 1296);
    auto j = classification_to_json(p, s3, g);
    CHECK(j["classes"].size() == 3);
    CHECK(j["bijection_verified"] == true);
}

TEST_CASE("classification matches brute-force holonomy orbits", "[bundles][property]") {
    for (const auto& f : fixtures::all()) {
        auto p = f.make();
        if (!validate_presentation(p).empty() || non_identity_maps(p) > 6) continue;
        for (const auto& g : small_groups()) {
            INFO(f.name << " |G|=" << g.order());
            CHECK(classify_bundles(p, g).classes.size() == oracles::labelling_orbits(p, g));
        }
    }
}

TEST_CASE("cocycle morphisms give bundle maps", "[bundles][morphism]") {
    auto p = fixtures::circ2();
    auto z2 = FiniteGroup::cyclic(2);
    CocycleGroupoid cg(p, z2);
    auto triv = trivial_cocycle(p, z2);
    auto bt = bundle_from_plot_cocycle(p, z2, triv);
    CocycleMorphism id{std::vector<Index>(cg.component_count(), 0)};
    auto m = morphism_to_bundle_map(p, z2, triv, triv, id, bt, bt);
    for (Index v = 0; v < m.size(); ++v) CHECK(m[v] == v);

    // Flipping on U relabels both maps into U.
    CocycleMorphism flip = id;
    flip.values[ComponentIndex(p).offset[p.probe_index("U")]] = 1;
    auto relabelled = gauge_transform(p, z2, flip, triv);
    CHECK(relabelled.labels[map_named(p, "P0→U")][0] == 1);
    CHECK(relabelled.labels[map_named(p, "P2→U")][0] == 1);
    CHECK(verify_cocycle_morphism(p, z2, triv, relabelled, flip).empty());
    auto br = bundle_from_plot_cocycle(p, z2, relabelled);
    auto map = morphism_to_bundle_map(p, z2, triv, relabelled, flip, bt, br);
    CHECK(std::set<Index>(map.begin(), map.end()).size() == 8);
    CHECK_THROWS_AS(morphism_to_bundle_map(p, z2, triv, triv, flip, bt, bt), ModelError);

    auto twisted = *cg.find(circ2_twisted(p, z2, 1));
    CHECK_FALSE(cg.find_morphism(*cg.find(triv), twisted));
    CHECK(cg.find_morphism(*cg.find(triv), *cg.find(relabelled)));
}

TEST_CASE("nerves of cocycle groupoids are 2-coskeletal", "[bundles][coskeletal]") {
    auto check = [](const FinCategory& c) {
        auto n = nerve(c, 4);
        CHECK(verify_simplicial_identities(n).empty());
        CHECK(is_k_coskeletal(n, 2, 4).holds);
    };
    check(CocycleGroupoid(fixtures::pt(), FiniteGroup::symmetric(3)).category());
    check(CocycleGroupoid(fixtures::disc2(), FiniteGroup::cyclic(3)).category());
    // On CIRC2 with Z/2, gauge transformations supported on the point probes.
    auto p = fixtures::circ2();
    CocycleGroupoid cg(p, FiniteGroup::cyclic(2));
    ComponentIndex ci(p);
    std::vector<std::size_t> sub;
    for (std::size_t i = 0; i < cg.gauge_order(); ++i) {
        auto h = cg.gauge_element(i);
        if (h.values[ci.offset[p.probe_index("U")]] == 0 && h.values[ci.offset[p.probe_index("V")]] == 0) sub.push_back(i);
    }
    REQUIRE(sub.size() == 4);
    check(cg.category(sub));
    CHECK_FALSE(is_k_coskeletal(nerve(FiniteGroup::cyclic(2).as_category(), 3), 1, 3).holds);
}
