// Normalized chains, Γ, coface complexes, Eilenberg–MacLane objects and W̄.
#include <random>

#include <catch_amalgamated.hpp>

#include "diffcech/cech.hpp"
#include "diffcech/dold_kan.hpp"
#include "diffcech/group.hpp"
#include "diffcech/random.hpp"

using namespace diffcech;

TEST_CASE("Γ of small complexes has the expected ranks", "[gamma]") {
    auto z0 = gamma(ChainComplex::concentrated(0, 1), 3);
    z0.verify();
    CHECK(z0 == SimplicialAbGroup::constant(FgAbGroup::integers(), 3));
    auto z1 = gamma(ChainComplex::concentrated(1, 1), 3);
    z1.verify();
    CHECK(z1.rank(0) == 0);
    CHECK(z1.rank(1) == 1);
    CHECK(z1.rank(2) == 2);
    auto z2 = gamma(ChainComplex::concentrated(2, 1), 4);
    z2.verify();
    CHECK(z2.rank(3) == 3);
}

TEST_CASE("normalized chains of small objects", "[normalized]") {
    auto nc = normalized_chain(SimplicialAbGroup::constant(FgAbGroup::integers(), 4));
    CHECK(nc.complex.rank(0) == 1);
    for (int n = 1; n <= 4; ++n) CHECK(nc.complex.rank(n) == 0);
    auto n1 = normalized_chain(gamma(ChainComplex::concentrated(1, 1), 4));
    for (int n = 0; n <= 4; ++n) CHECK(n1.complex.rank(n) == (n == 1 ? 1u : 0u));
    // Free on the nerve of Z/2: one non-degenerate simplex per degree.
    auto x = nerve(FiniteGroup::cyclic(2).as_category(), 4);
    auto nf = normalized_chain(SimplicialAbGroup::free_on(x));
    for (int n = 0; n <= 4; ++n) CHECK(nf.complex.rank(n) == x.nondegenerate_count(static_cast<std::size_t>(n)));
}

TEST_CASE("Dold-Kan round trip on random complexes", "[gamma][property]") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 100; ++trial) {
        auto c = random::complex(rng, 4);
        std::string why;
        INFO("trial " << trial);
        REQUIRE(check_gamma_round_trip(c, 5, &why));
    }
}

TEST_CASE("simplicial operators agree with faces and degeneracies", "[gamma]") {
    auto g = gamma(ChainComplex::concentrated(2, 1), 4);
    for (std::size_t n = 1; n <= 4; ++n)
        for (std::size_t i = 0; i <= n; ++i) CHECK(simplicial_operator(g, detail::coface_map(n, i), n) == g.face(n, i));
    for (std::size_t n = 0; n < 4; ++n)
        for (std::size_t i = 0; i <= n; ++i)
            CHECK(simplicial_operator(g, detail::codegeneracy_map(n, i), n) == g.degeneracy(n, i));
    // A composite: θ = δ^1 ∘ σ^0 : [2] -> [2] gives s_0 d_1.
    Monotone theta{0, 0, 2};
    CHECK(simplicial_operator(g, theta, 2) == g.degeneracy(1, 0) * g.face(2, 1));
}

TEST_CASE("coface complexes of constant objects", "[coface]") {
    auto c = CosimplicialAbGroup::constant(FgAbGroup::cyclic(4), 4);
    auto alt = alternating_coface(c);
    CHECK(cohomology(alt, 0) == FgAbGroup::cyclic(4));
    for (int k = 1; k < 4; ++k) CHECK(cohomology(alt, k).is_trivial());
    auto nc = normalized_coface(c);
    CHECK(nc.coordinate);
    CHECK(nc.complex.rank(0) == 1);
    for (int k = 1; k <= 4; ++k) CHECK(nc.complex.rank(k) == 0);
    auto zero = CosimplicialAbGroup::constant(FgAbGroup::trivial(), 3);
    for (int k = 0; k < 3; ++k) CHECK(cohomology(alternating_coface(zero), k).is_trivial());
}

TEST_CASE("alternating and normalized coface cohomology agree on random inputs", "[coface][property]") {
    std::mt19937_64 rng(77);
    const FgAbGroup coeffs[] = {FgAbGroup::integers(), FgAbGroup::cyclic(2), FgAbGroup::parse("Z+Z/3")};
    for (int trial = 0; trial < 100; ++trial) {
        auto x = random::simplicial_set(rng, 4);
        auto a = functions_cosimplicial(x, coeffs[trial % 3]);
        auto alt = alternating_coface(a);
        auto norm = normalized_coface(a);
        // The quotient presentation goes through dense kernels; keep it to moderate sizes.
        const bool quotient = a.rank(4) <= 200;
        for (int k = 0; k <= 3; ++k) {
            INFO("trial " << trial << " degree " << k);
            REQUIRE(cohomology(alt, k) == cohomology(norm.complex, k));
            if (quotient) REQUIRE(conormalized_quotient_cohomology(a, static_cast<std::size_t>(k)) == cohomology(alt, k));
        }
    }
}

TEST_CASE("Eilenberg-MacLane objects have a single homotopy group", "[em]") {
    auto e0 = em_object(FgAbGroup::integers(), 0, 3);
    CHECK(e0 == SimplicialAbGroup::constant(FgAbGroup::integers(), 3));
    auto h1 = moore_homotopy(em_object(FgAbGroup::cyclic(2), 1, 4));
    CHECK(h1.groups[0].is_trivial());
    CHECK(h1.groups[1] == FgAbGroup::cyclic(2));
    CHECK(h1.groups[2].is_trivial());
    auto a = FgAbGroup::parse("Z+Z/4");
    auto h2 = moore_homotopy(em_object(a, 2, 5));
    for (std::size_t k = 0; k < 5; ++k) CHECK(h2.groups[k] == (k == 2 ? a : FgAbGroup::trivial()));
    auto h22 = moore_homotopy(em_object(FgAbGroup::integers(), 2, 4));
    CHECK(h22.groups[2] == FgAbGroup::integers());
    CHECK_THROWS_AS(em_object(FgAbGroup::integers(), 2, 3), BoundError);
}

TEST_CASE("W̄ of constant groups", "[wbar]") {
    auto w0 = wbar(SimplicialAbGroup::constant(FgAbGroup::trivial(), 4), 4);
    w0.verify();
    for (std::size_t n = 0; n <= 4; ++n) CHECK(moore_homotopy(w0).groups.size() == 4);
    auto w = wbar(SimplicialAbGroup::constant(FgAbGroup::cyclic(2), 4), 4);
    w.verify();
    for (std::size_t n = 0; n <= 4; ++n) CHECK(w.rank(n) == n);
    auto nw = normalized_chain(w);
    for (int n = 0; n <= 4; ++n) CHECK(nw.complex.rank(n) == (n == 1 ? 1u : 0u));
    auto h = moore_homotopy(w);
    CHECK(h.groups[0].is_trivial());
    CHECK(h.groups[1] == FgAbGroup::cyclic(2));
    CHECK(h.groups[2].is_trivial());
}

TEST_CASE("N(W̄G) is N(G) shifted by one", "[wbar][property]") {
    std::string why;
    CHECK(check_wbar_shift(SimplicialAbGroup::constant(FgAbGroup::integers(), 4), 5, &why));
    CHECK(check_wbar_shift(em_object(FgAbGroup::integers(), 1, 4), 5, &why));
    CHECK(check_wbar_shift(em_object(FgAbGroup::cyclic(6), 2, 4), 5, &why));
    CHECK(check_wbar_shift(SimplicialAbGroup::free_on(nerve(FiniteGroup::cyclic(3).as_category(), 3)), 4, &why));
    INFO(why);
    auto h = moore_homotopy(wbar(em_object(FgAbGroup::integers(), 1, 5), 5));
    CHECK(h.groups[1].is_trivial());
    CHECK(h.groups[2] == FgAbGroup::integers());
}

TEST_CASE("iterated W̄ is isomorphic to the Eilenberg-MacLane object", "[wbar][property]") {
    for (const char* a : {"Z", "Z/2", "Z/6", "Z+Z/4"}) {
        auto group = FgAbGroup::parse(a);
        for (std::size_t k = 0; k <= 3; ++k) {
            INFO(a << " k=" << k);
            auto it = wbar_iter(group, k, k + 2);
            auto h = moore_homotopy(it.object);
            for (std::size_t j = 0; j <= k; ++j) REQUIRE(h.groups[j] == (j == k ? group : FgAbGroup::trivial()));
        }
    }
    auto it = wbar_iter(FgAbGroup::cyclic(2), 1, 4);
    CHECK(it.model == em_object(FgAbGroup::cyclic(2), 1, 4));
}
