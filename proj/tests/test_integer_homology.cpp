// Smith normal form, (co)homology, shifts and total complexes.
#include <random>

#include <catch_amalgamated.hpp>

#include "diffcech/complex.hpp"
#include "diffcech/random.hpp"

using namespace diffcech;

namespace {

IntMatrix permutation(std::mt19937_64& rng, std::size_t n) {
    std::vector<std::size_t> p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = i;
    std::shuffle(p.begin(), p.end(), rng);
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.push_back_entry(i, p[i], 1);
    return m;
}

// Boundary matrix of the 3-cycle graph: vertices 0,1,2; edges 01, 12, 02.
ChainComplex triangle_graph() {
    IntMatrix d1{{-1, 0, -1}, {1, -1, 0}, {0, 1, 1}};
    return ChainComplex(0, {3, 3}, {d1});
}

}  // namespace

TEST_CASE("smith normal form on small matrices", "[snf]") {
    auto id = smith_normal_form(IntMatrix::identity(3));
    CHECK(id.D == IntMatrix::identity(3));

    auto f = smith_normal_form(IntMatrix{{2, 4}, {6, 8}});
    CHECK(f.D == (IntMatrix{{2, 0}, {0, 4}}));
    CHECK(f.U * IntMatrix{{2, 4}, {6, 8}} * f.V == f.D);

    auto z = smith_normal_form(IntMatrix(2, 3));
    CHECK(z.D == IntMatrix(2, 3));
    CHECK(z.rank() == 0);
}

TEST_CASE("smith normal form on random matrices", "[snf][property]") {
    std::mt19937_64 rng(12345);
    std::uniform_int_distribution<int> dim(1, 6);
    for (int trial = 0; trial < 1000; ++trial) {
        IntMatrix m = random::matrix(rng, dim(rng), dim(rng), 100);
        auto f = smith_normal_form(m);
        REQUIRE(f.U * m * f.V == f.D);
        REQUIRE(abs_value(determinant(f.U)) == 1);
        REQUIRE(abs_value(determinant(f.V)) == 1);
        REQUIRE(is_smith_diagonal(f.D));
        REQUIRE(smith_invariants(m) == f.invariants);
    }
}

TEST_CASE("sparse invariants agree with the dense reduction", "[snf]") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> sparse(-4, 4);
    for (int trial = 0; trial < 100; ++trial) {
        IntMatrix m(12, 9);
        for (std::size_t i = 0; i < 12; ++i)
            for (std::size_t j = 0; j < 9; ++j) {
                int v = sparse(rng);
                if (std::abs(v) <= 1) m.push_back_entry(i, j, v);
                else if (v == 4) m.push_back_entry(i, j, 3);
            }
        REQUIRE(smith_invariants(m) == smith_normal_form(m).invariants);
    }
}

TEST_CASE("determinant and lattice solving", "[snf]") {
    CHECK(determinant(IntMatrix{{2, 1}, {7, 4}}) == 1);
    CHECK(determinant(IntMatrix{{0, 1}, {1, 0}}) == -1);
    IntMatrix b{{2, 0}, {0, 3}, {0, 0}};
    auto x = solve_in_lattice(b, IntMatrix{{4}, {9}, {0}});
    REQUIRE(x);
    CHECK(*x == (IntMatrix{{2}, {3}}));
    CHECK_FALSE(solve_in_lattice(b, IntMatrix{{1}, {0}, {0}}));
    CHECK(kernel_basis(IntMatrix{{1, 1}}).cols() == 1);
}

TEST_CASE("fg abelian group normal form and parsing", "[group]") {
    CHECK(FgAbGroup::parse("Z/2+Z/3") == FgAbGroup::cyclic(6));
    CHECK(FgAbGroup::parse("Z/4 ⊕ Z/6").torsion() == std::vector<Integer>{2, 12});
    CHECK(FgAbGroup::parse("Z^2 + (Z/2)^2").to_string() == "Z^2 + (Z/2)^2");
    CHECK(FgAbGroup::parse("0").is_trivial());
    CHECK(FgAbGroup::parse("Z").to_string() == "Z");
    CHECK_THROWS_AS(FgAbGroup::parse("Q"), MalformedInput);
    CHECK_THROWS_AS(FgAbGroup::parse("Z/0"), MalformedInput);
}

TEST_CASE("functions_group is the c-fold power", "[group]") {
    CHECK(functions_group(0, FgAbGroup::integers()).is_trivial());
    CHECK(functions_group(1, FgAbGroup::integers()) == FgAbGroup::integers());
    CHECK(functions_group(3, FgAbGroup::cyclic(2)).torsion() == std::vector<Integer>{2, 2, 2});
    CHECK(functions_group(2, FgAbGroup::parse("Z+Z/4")) == FgAbGroup::parse("Z^2+Z/4+Z/4"));
}

TEST_CASE("homology of small complexes", "[homology]") {
    ChainComplex times_two(0, {1, 1}, {IntMatrix{{2}}});
    CHECK(homology(times_two, 0) == FgAbGroup::cyclic(2));
    CHECK(homology(times_two, 1).is_trivial());

    ChainComplex zero(0, {0, 0, 0}, {IntMatrix(0, 0), IntMatrix(0, 0)});
    for (int n = -1; n <= 3; ++n) CHECK(homology(zero, n).is_trivial());

    auto tri = triangle_graph();
    tri.verify();
    CHECK(homology(tri, 0) == FgAbGroup::integers());
    CHECK(homology(tri, 1) == FgAbGroup::integers());
    CHECK(homology(tri, 2).is_trivial());
}

TEST_CASE("malformed complexes are rejected", "[homology]") {
    CHECK_THROWS_AS(ChainComplex(0, {2, 1}, {IntMatrix{{1}}}), MalformedInput);
    ChainComplex bad(0, {1, 1, 1}, {IntMatrix{{1}}, IntMatrix{{1}}});
    CHECK_THROWS_AS(bad.verify(), MalformedInput);
}

TEST_CASE("torsion coefficients match the universal coefficient oracle", "[homology][property]") {
    // Oracle: H_n(C; Z/d) = H_n(C) ⊗ Z/d ⊕ Tor(H_{n-1}(C), Z/d), evaluated on cyclic summands.
    auto uct = [](const FgAbGroup& hn, const FgAbGroup& hn1, const Integer& d) {
        std::vector<Integer> orders;
        auto gcd = [](Integer a, Integer b) {
            while (b != 0) {
                Integer t = a % b;
                a = b;
                b = t;
            }
            return a;
        };
        for (std::size_t i = 0; i < hn.free_rank(); ++i) orders.push_back(d);
        for (const auto& t : hn.torsion()) orders.push_back(gcd(t, d));
        for (const auto& t : hn1.torsion()) orders.push_back(gcd(t, d));
        return FgAbGroup::from_cyclic_orders(orders);
    };
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 60; ++trial) {
        IntMatrix d2 = random::matrix(rng, 3, 2, 3);
        // Make d1 with d1·d2 = 0 by choosing rows orthogonal to im d2.
        IntMatrix left = kernel_basis(d2.transpose()).transpose();
        IntMatrix coeffs = random::matrix(rng, 3, left.rows(), 2);
        IntMatrix d1 = left.rows() ? coeffs * left : IntMatrix(3, 3);
        ChainComplex c(0, {3, 3, 2}, {d1, d2});
        c.verify();
        for (Integer d : {2, 3, 4, 6}) {
            auto cd = c.with_coefficients(FgAbGroup::cyclic(d));
            for (int n = 0; n <= 2; ++n)
                REQUIRE(homology(cd, n) == uct(homology(c, n), homology(c, n - 1), d));
        }
    }
}

TEST_CASE("homology is invariant under basis permutation", "[homology][property]") {
    std::mt19937_64 rng(4242);
    for (int trial = 0; trial < 50; ++trial) {
        IntMatrix d2 = random::matrix(rng, 4, 3, 3);
        IntMatrix left = kernel_basis(d2.transpose()).transpose();
        IntMatrix d1 = left.rows() ? random::matrix(rng, 3, left.rows(), 2) * left : IntMatrix(3, 4);
        ChainComplex c(0, {3, 4, 3}, {d1, d2});
        IntMatrix p0 = permutation(rng, 3), p1 = permutation(rng, 4), p2 = permutation(rng, 3);
        // Conjugate: new ∂ = P_{n-1} ∂ P_n^{-1}; permutation inverse is the transpose.
        ChainComplex pc(0, {3, 4, 3}, {p0 * d1 * p1.transpose(), p1 * d2 * p2.transpose()});
        for (int n = 0; n <= 2; ++n) REQUIRE(homology(pc, n) == homology(c, n));
    }
}

TEST_CASE("shift re-indexes degrees", "[shift]") {
    auto z0 = ChainComplex::concentrated(0, 1);
    auto z1 = shift(z0, 1);
    CHECK(z1.lo() == 1);
    CHECK(z1.rank(1) == 1);
    CHECK(z1.rank(0) == 0);
    CHECK(homology(z1, 1) == FgAbGroup::integers());
    auto tri = triangle_graph();
    CHECK(shift(tri, 0) == tri);
    CHECK(shift(shift(tri, 1), -1) == tri);
}

TEST_CASE("total complex of degenerate double complexes", "[total]") {
    DoubleComplex single(0, 0, 0, 0);
    single.set_rank(0, 0, 2);
    auto t = total_cochain_complex(single);
    CHECK(t.rank(0) == 2);
    CHECK(cohomology(t, 0) == FgAbGroup::integers(2));

    // Only row q = 0: the 3-cycle cochain complex Z^3 -> Z^3.
    DoubleComplex row(0, 1, 0, 0);
    row.set_rank(0, 0, 3);
    row.set_rank(1, 0, 3);
    row.set_horizontal(0, 0, triangle_graph().boundary(1).transpose());
    row.verify();
    auto tr = total_cochain_complex(row);
    CHECK(cohomology(tr, 0) == FgAbGroup::integers());
    CHECK(cohomology(tr, 1) == FgAbGroup::integers());

    // Only column p = 0, vertical ×2: Z (q=1) -> Z (q=0); total degrees -1, 0.
    DoubleComplex col(0, 0, 0, 1);
    col.set_rank(0, 0, 1);
    col.set_rank(0, 1, 1);
    col.set_vertical(0, 1, IntMatrix{{2}});
    auto tc = total_cochain_complex(col);
    CHECK(cohomology(tc, 0) == FgAbGroup::cyclic(2));
    CHECK(cohomology(tc, -1).is_trivial());
}

TEST_CASE("non-commuting double complex is rejected", "[total]") {
    DoubleComplex d(0, 1, 0, 1);
    for (int p = 0; p <= 1; ++p)
        for (int q = 0; q <= 1; ++q) d.set_rank(p, q, 1);
    d.set_horizontal(0, 0, IntMatrix{{1}});
    d.set_horizontal(0, 1, IntMatrix{{1}});
    d.set_vertical(0, 1, IntMatrix{{1}});
    d.set_vertical(1, 1, IntMatrix{{2}});
    CHECK_THROWS_AS(d.verify(), MalformedInput);
}
