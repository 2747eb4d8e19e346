// Simplicial sets, nerves, Čech nerves, coskeletality and Moore homotopy.
#include <random>

#include <catch_amalgamated.hpp>

#include "diffcech/cech.hpp"
#include "diffcech/group.hpp"
#include "diffcech/simplicial_ab.hpp"

using namespace diffcech;

namespace {

FinCategory discrete_category(std::size_t n) {
    std::vector<std::string> objs;
    std::vector<FinCategory::Arrow> arrows;
    std::vector<Index> ids;
    for (Index o = 0; o < n; ++o) {
        objs.push_back("o" + std::to_string(o));
        arrows.push_back({"id" + std::to_string(o), o, o});
        ids.push_back(o);
    }
    return FinCategory(objs, arrows, ids, [](Index g, Index) { return g; });
}

// The poset 0 < 1 < 2 as a category: arrows id0 id1 id2, a:0->1, b:1->2, ba:0->2.
FinCategory chain_poset() {
    std::vector<FinCategory::Arrow> arrows{{"id0", 0, 0}, {"id1", 1, 1}, {"id2", 2, 2},
                                           {"a", 0, 1},   {"b", 1, 2},   {"ba", 0, 2}};
    return FinCategory::from_table({"0", "1", "2"}, arrows, {0, 1, 2}, {{4, 3, 5}});
}

std::size_t count_nondegenerate(const TruncatedSimplicialSet& x, std::size_t k) { return x.nondegenerate_count(k); }

}  // namespace

TEST_CASE("nerve of a one-object group has |G|^k simplices", "[nerve]") {
    auto x = nerve(FiniteGroup::cyclic(2).as_category(), 3);
    CHECK(x.count(0) == 1);
    CHECK(x.count(1) == 2);
    CHECK(x.count(2) == 4);
    CHECK(x.count(3) == 8);
    CHECK(verify_simplicial_identities(x).empty());
    // Non-degenerate chains avoid the identity: 1, 1, 1, 1.
    for (std::size_t k = 0; k <= 3; ++k) CHECK(count_nondegenerate(x, k) == 1);
}

TEST_CASE("nerve of the trivial category", "[nerve]") {
    auto x = nerve(FiniteGroup::trivial().as_category(), 3);
    for (std::size_t k = 0; k <= 3; ++k) CHECK(x.count(k) == 1);
    CHECK(verify_simplicial_identities(x).empty());
    CHECK(is_k_coskeletal(x, 0, 3).holds);
}

TEST_CASE("nerve of a discrete category has only degenerate higher simplices", "[nerve]") {
    auto x = nerve(discrete_category(3), 2);
    CHECK(x.count(0) == 3);
    CHECK(count_nondegenerate(x, 1) == 0);
    CHECK(count_nondegenerate(x, 2) == 0);
    CHECK(pi0(x).count == 3);
}

TEST_CASE("nerve faces compose and the Eilenberg-Zilber form is recovered", "[nerve]") {
    auto c = chain_poset();
    CHECK(verify_category_laws(c).empty());
    auto x = nerve(c, 3);
    CHECK(verify_simplicial_identities(x).empty());
    CHECK(count_nondegenerate(x, 2) == 1);  // (a, b)
    CHECK(count_nondegenerate(x, 3) == 0);
    for (Index s = 0; s < x.count(3); ++s) {
        auto nf = x.normal_form(3, s);
        for (std::size_t t = 0; t + 1 < nf.word.size(); ++t) CHECK(nf.word[t] > nf.word[t + 1]);
        CHECK(!x.is_degenerate(nf.degree, nf.generator));
        // Re-applying the word reproduces the simplex.
        Index y = nf.generator;
        std::size_t k = nf.degree;
        for (std::size_t t = nf.word.size(); t-- > 0;) y = x.degeneracy(k++, nf.word[t], y);
        CHECK(y == s);
    }
    CHECK(pi0(x).count == 1);
}

TEST_CASE("category law violations are reported", "[category]") {
    std::vector<FinCategory::Arrow> arrows{{"id0", 0, 0}, {"id1", 1, 1}, {"id2", 2, 2},
                                           {"a", 0, 1},   {"b", 1, 2},   {"ba", 0, 2}};
    // b ∘ a is declared to be a, which has the wrong target.
    auto bad = FinCategory::from_table({"0", "1", "2"}, arrows, {0, 1, 2}, {{4, 3, 3}});
    CHECK_FALSE(verify_category_laws(bad).empty());
    CHECK_FALSE(verify_category_laws(chain_poset(), 1000, true).empty());  // not a groupoid
    CHECK(verify_category_laws(FiniteGroup::symmetric(3).as_category(), 1000000, true).empty());
}

TEST_CASE("nerves are 2-coskeletal but group nerves are not 1-coskeletal", "[coskeletal]") {
    for (const auto& c : {chain_poset(), FiniteGroup::cyclic(2).as_category(), FiniteGroup::symmetric(3).as_category(),
                          discrete_category(2)})
        CHECK(is_k_coskeletal(nerve(c, 4), 2, 4).holds);
    auto r = is_k_coskeletal(nerve(FiniteGroup::cyclic(2).as_category(), 4), 1, 4);
    CHECK_FALSE(r.holds);
    CHECK(r.degree == 2);
    CHECK(r.fillers == 0);
}

TEST_CASE("constant simplicial sets and coskeletality", "[coskeletal]") {
    auto one = constant_simplicial_set(1, 3);
    CHECK(verify_simplicial_identities(one).empty());
    CHECK(is_k_coskeletal(one, 0, 3).holds);
    auto two = constant_simplicial_set(2, 3);
    auto r = is_k_coskeletal(two, 0, 3);
    CHECK_FALSE(r.holds);  // the boundary (a, b) of a 1-simplex has no filler
    CHECK(r.degree == 1);
    CHECK(is_k_coskeletal(two, 1, 3).holds);
}

TEST_CASE("corrupted face tables are named", "[verify]") {
    auto x = nerve(chain_poset(), 2);
    // Send every 2-simplex's d_2 to the same edge.
    auto& f = x.face_map(2, 2);
    std::fill(f.begin(), f.end(), Index(3));
    auto v = verify_simplicial_identities(x);
    REQUIRE_FALSE(v.empty());
    bool named = false;
    for (const auto& e : v) named = named || e.identity == "d_0d_2 = d_1d_0" || e.identity == "d_1d_2 = d_1d_1";
    CHECK(named);
}

TEST_CASE("cech nerve of the identity is constant", "[cech]") {
    ProbeGraph b({"p", "q", "r"}, std::vector<std::pair<Index, Index>>{});
    auto x = cech_nerve(b, {0, 1, 2}, 3, 3);
    auto c = constant_simplicial_set(3, 3);
    for (std::size_t k = 0; k <= 3; ++k) {
        CHECK(x.count(k) == 3);
        CHECK(x.component_count(k) == 3);
        for (std::size_t i = 0; k > 0 && i <= k; ++i) CHECK(x.face_map(k, i) == c.face_map(k, i));
    }
    CHECK(verify_simplicial_identities(x).empty());
}

TEST_CASE("two arcs over a four-point circle intersect in two components", "[cech]") {
    // U = u0-u1-u2 over 0,1,2 and V = v2-v3-v0 over 2,3,0.
    ProbeGraph b({"u0", "u1", "u2", "v2", "v3", "v0"},
                 std::vector<std::pair<std::string, std::string>>{{"u0", "u1"}, {"u1", "u2"}, {"v2", "v3"}, {"v3", "v0"}});
    auto x = cech_nerve(b, {0, 1, 2, 2, 3, 0}, 4, 3);
    CHECK(verify_simplicial_identities(x).empty());
    CHECK(x.component_count(0) == 2);
    // U×U, V×V one each, U×V and V×U two each.
    CHECK(x.component_count(1) == 6);
    CHECK(pi0(x).count == 1);
}

TEST_CASE("cech nerve requires a surjection", "[cech]") {
    ProbeGraph b({"p"}, std::vector<std::pair<Index, Index>>{});
    CHECK_THROWS_AS(cech_nerve(b, {0}, 2, 2), ModelError);
}

TEST_CASE("moore homotopy of constant and free objects", "[moore]") {
    auto c = SimplicialAbGroup::constant(FgAbGroup::parse("Z+Z/3"), 4);
    auto h = moore_homotopy(c);
    CHECK(h.groups[0] == FgAbGroup::parse("Z+Z/3"));
    for (std::size_t k = 1; k < h.groups.size(); ++k) CHECK(h.groups[k].is_trivial());

    // Z[N(Z/2)]: homology of RP^∞ is Z, Z/2, 0, Z/2 in degrees 0..3.
    auto f = SimplicialAbGroup::free_on(nerve(FiniteGroup::cyclic(2).as_category(), 5));
    f.verify();
    auto m = moore_complex(f);
    CHECK(m.complex.rank(0) == 1);
    CHECK(m.complex.rank(1) == 1);
    CHECK(m.complex.rank(2) == 1);
    auto hf = moore_homotopy(f);
    CHECK(hf.groups[0] == FgAbGroup::integers());
    CHECK(hf.groups[1] == FgAbGroup::cyclic(2));
    CHECK(hf.groups[2].is_trivial());
    CHECK(hf.groups[3] == FgAbGroup::cyclic(2));
}

TEST_CASE("functions on a simplicial set satisfy the cosimplicial identities", "[functions]") {
    auto x = nerve(chain_poset(), 3);
    // A nerve without explicit components: every simplex is its own component.
    auto g = functions_cosimplicial(constant_simplicial_set(2, 3), FgAbGroup::integers());
    g.verify();
    CHECK(g.rank(2) == 2);
    CHECK_THROWS_AS(functions_cosimplicial(x, FgAbGroup::integers()), ModelError);
}
