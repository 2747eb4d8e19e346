// The cohomology routes on presentations, their agreement, and report stability.
#include <random>

#include <catch_amalgamated.hpp>

#include "diffcech/bundles.hpp"
#include "diffcech/cohomology.hpp"
#include "diffcech/fixtures.hpp"
#include "diffcech/oracles.hpp"
#include "diffcech/random.hpp"

using namespace diffcech;

namespace {

FgAbGroup z() { return FgAbGroup::integers(); }

void check_against_oracle(const PlotPresentation& p, const oracles::SimplicialBetti& oracle, std::size_t k_max) {
    REQUIRE(oracle.torsion_free);
    for (Theory t : {Theory::PizQx, Theory::Kww, Theory::Tot}) {
        auto reports = theory_reports(p, z(), t, k_max);
        for (std::size_t k = 0; k <= k_max; ++k) {
            INFO(theory_tag(t) << " degree " << k);
            REQUIRE(reports[k].answer);
            const std::size_t expected = k < oracle.betti.size() ? oracle.betti[k] : 0;
            CHECK(*reports[k].answer == FgAbGroup::integers(expected));
        }
    }
}

std::vector<fixtures::NamedFixture> valid_fixtures() {
    std::vector<fixtures::NamedFixture> out;
    for (const auto& f : fixtures::all())
        if (f.name != "circ2_corrupt") out.push_back(f);
    return out;
}

}  // namespace

TEST_CASE("theory names", "[cohomology]") {
    for (Theory t : all_theories()) CHECK(parse_theory(theory_tag(t)) == t);
    CHECK(parse_theory("piz-qx") == Theory::PizQx);
    CHECK(parse_theory("tot") == Theory::Tot);
    CHECK_THROWS_AS(parse_theory("cech"), MalformedInput);
}

TEST_CASE("the point", "[cohomology]") {
    for (const auto& a : {z(), FgAbGroup::cyclic(2), FgAbGroup::parse("Z+Z/4")}) {
        auto c = compare_theories(fixtures::pt(), a, 3, true);
        for (const auto& row : c.rows) {
            CHECK(row.agree);
            for (const auto& [t, r] : row.cells) {
                REQUIRE(r.answer);
                CHECK(*r.answer == (row.degree == 0 ? a : FgAbGroup::trivial()));
            }
        }
    }
}

TEST_CASE("circles and the octahedral sphere match simplicial cohomology", "[cohomology][oracle]") {
    const auto circle = oracles::simplicial_betti(oracles::square_boundary());
    CHECK(circle.betti == std::vector<std::size_t>{1, 1});
    const auto sphere = oracles::simplicial_betti(octahedron_boundary());
    CHECK(sphere.betti == std::vector<std::size_t>{1, 0, 1});
    check_against_oracle(fixtures::circ2(), circle, 2);
    check_against_oracle(fixtures::circ4(), circle, 2);
    check_against_oracle(fixtures::sph_oct(), sphere, 2);
}

TEST_CASE("degree bounds and resource limits", "[cohomology]") {
    CHECK_THROWS_AS(tot_cohomology(fixtures::pt(), z(), 2, 3), BoundError);
    CHECK_NOTHROW(tot_cohomology(fixtures::pt(), z(), 2, 4));
    auto r = theory_reports(fixtures::sph_oct(), z(), Theory::Tot, 1, 10);
    for (const auto& cell : r) {
        CHECK_FALSE(cell.answer);
        CHECK(cell.error.find("resource limit") == 0);
        CHECK(report_to_json(cell)["free_rank"].is_null());
    }
}

TEST_CASE("KWW on the disconnected and two-arc presentations", "[cohomology][kww]") {
    const auto z2 = FgAbGroup::cyclic(2);
    auto d = theory_reports(fixtures::disc2(), z2, Theory::Kww, 2);
    CHECK(*d[0].answer == FgAbGroup::from_cyclic_orders({2, 2}));
    CHECK(*d[1].answer == FgAbGroup::trivial());
    CHECK(*d[2].answer == FgAbGroup::trivial());

    auto arcs = theory_reports(fixtures::circ2_arcs(), z(), Theory::Kww, 1);
    CHECK(arcs[0].census["components"][1] == 6);
    CHECK(*arcs[0].answer == z());
    CHECK(*arcs[1].answer == z());
}

TEST_CASE("KWW agrees with PIZ on the fixtures with overlap probes", "[cohomology][kww]") {
    for (const auto& f : valid_fixtures()) {
        if (f.name == "circ2_arcs") continue;
        INFO(f.name);
        auto c = compare_theories(f.make(), z(), 2);
        for (const auto& row : c.rows) CHECK(row.agree);
    }
}

TEST_CASE("the two-arc presentation separates KWW from PIZ", "[cohomology][kww][regression]") {
    // No probe witnesses the overlaps, so QX is two disjoint contractible pieces while the Čech
    // nerve over X sees the circle.
    auto c = compare_theories(fixtures::circ2_arcs(), z(), 1);
    CHECK(*c.rows[0].cells.at(Theory::PizQx).answer == FgAbGroup::integers(2));
    CHECK(*c.rows[0].cells.at(Theory::Kww).answer == z());
    CHECK(*c.rows[1].cells.at(Theory::PizQx).answer == FgAbGroup::trivial());
    CHECK(*c.rows[1].cells.at(Theory::Kww).answer == z());
    CHECK_FALSE(c.rows[0].agree);
    CHECK_FALSE(c.rows[1].agree);
    CHECK(*c.rows[1].cells.at(Theory::Tot).answer == *c.rows[1].cells.at(Theory::PizQx).answer);
}

TEST_CASE("the bar route carries its caveats", "[cohomology][bar]") {
    auto r = theory_reports(fixtures::circ2(), z(), Theory::PizBm, 2);
    REQUIRE(r[1].answer);
    CHECK(*r[1].answer == z());
    bool discrete = false;
    for (const auto& c : r[1].caveats) discrete = discrete || c.find("discrete") != std::string::npos;
    CHECK(discrete);
    CHECK(r[1].census.contains("gauge_order"));
}

TEST_CASE("alternating and normalized coface complexes agree on every route", "[cohomology]") {
    for (const auto& f : valid_fixtures())
        for (Theory t : {Theory::PizQx, Theory::Kww}) {
            INFO(f.name << " " << theory_tag(t));
            for (const auto& r : theory_reports(f.make(), FgAbGroup::cyclic(6), t, 2))
                if (r.answer) CHECK(r.census["alternating_cross_check"] == "agree");
        }
}

TEST_CASE("totalization agrees with normalized coface cohomology on random simplicial sets",
          "[cohomology][tot][property]") {
    const std::vector<FgAbGroup> coeffs{z(), FgAbGroup::cyclic(2), FgAbGroup::cyclic(6), FgAbGroup::parse("Z+Z/4")};
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        std::mt19937_64 rng(seed);
        const std::size_t k = seed % 4;
        const auto& a = coeffs[(seed / 4) % coeffs.size()];
        auto x = random::simplicial_set(rng, k + 2);
        INFO("seed " << seed);
        CHECK(totalization_cohomology(x, a, k) ==
              cohomology(normalized_coface(functions_cosimplicial(x, a)).complex, static_cast<int>(k)));
    }
}

TEST_CASE("totalization agrees with the QX route on fixtures and random presentations",
          "[cohomology][tot][property]") {
    auto agree = [](const PlotPresentation& p, const FgAbGroup& a) {
        auto tot = theory_reports(p, a, Theory::Tot, 2);
        auto qx = theory_reports(p, a, Theory::PizQx, 2);
        for (std::size_t k = 0; k <= 2; ++k) {
            INFO("degree " << k);
            REQUIRE(tot[k].answer.has_value() == qx[k].answer.has_value());
            if (tot[k].answer) CHECK(*tot[k].answer == *qx[k].answer);
        }
    };
    for (const auto& f : valid_fixtures()) {
        INFO(f.name);
        agree(f.make(), z());
        agree(f.make(), FgAbGroup::cyclic(2));
    }
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        std::mt19937_64 rng(seed);
        auto p = random::presentation(rng);
        INFO("seed " << seed);
        agree(p, seed % 2 == 0 ? z() : FgAbGroup::cyclic(3));
    }
}

TEST_CASE("bundle classes are counted by degree-one cohomology", "[cohomology][bundles]") {
    for (const auto& f : valid_fixtures()) {
        if (f.name == "sph_oct") continue;  // the cocycle set is over the enumeration cap
        for (std::size_t n : {2, 3}) {
            INFO(f.name << " Z/" << n);
            auto p = f.make();
            auto h1 = piz_cohomology(p, FgAbGroup::cyclic(n), 1);
            REQUIRE(h1.answer);
            REQUIRE(h1.answer->free_rank() == 0);
            CHECK(Integer(classify_bundles(p, FiniteGroup::cyclic(n)).classes.size()) == h1.answer->order());
        }
    }
}

TEST_CASE("reports are byte-stable", "[cohomology][determinism]") {
    auto once = [] {
        std::string s;
        for (const auto& f : valid_fixtures()) {
            auto c = compare_theories(f.make(), FgAbGroup::parse("Z+Z/2"), 1, true);
            s += comparison_to_json(c).dump(2) + comparison_to_text(c);
        }
        return s;
    };
    const auto first = once();
    CHECK(first == once());
    auto j = report_to_json(tot_cohomology(fixtures::circ2(), z(), 1));
    CHECK(j["theory"] == "TOT");
    CHECK(j["free_rank"] == 1);
    CHECK(j["torsion"].empty());
    CHECK(j["caveats"][0] == "computed on the 3-truncation");
    CHECK(report_to_text(tot_cohomology(fixtures::circ2(), z(), 1)).rfind("TOT: H^1 = Z\n", 0) == 0);
}
