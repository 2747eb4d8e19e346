/**
 * The acceptance suite: twelve criteria, each run in isolation and reported as one line.
 * Reports depend only on the seed; elapsed times are kept apart so that two runs with the
 * same seed print identical bytes.
 */
#pragma once

#include <chrono>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bundles.hpp"
#include "cohomology.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "phi_psi.hpp"
#include "random.hpp"

namespace diffcech::acceptance {

struct CriterionResult {
    int id = 0;
    std::string title;
    bool passed = false;
    std::string detail;  // what was checked, or the first failure
    double seconds = 0;  // never part of the report
    double budget = 0;   // seconds allowed, 0 for none
};

/// Thrown inside a criterion to stop at the first failure with a readable witness.
struct CriterionFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline void expect(bool ok, const std::string& what) {
    if (!ok) throw CriterionFailure(what);
}

namespace detail {

inline std::vector<FgAbGroup> coefficient_list() {
    return {FgAbGroup::integers(), FgAbGroup::cyclic(2), FgAbGroup::cyclic(6), FgAbGroup::parse("Z+Z/4")};
}

inline std::vector<fixtures::NamedFixture> valid_fixtures() {
    std::vector<fixtures::NamedFixture> out;
    for (const auto& f : fixtures::all())
        if (validate_presentation(f.make()).empty()) out.push_back(f);
    return out;
}

inline Index map_named(const PlotPresentation& p, const std::string& id) {
    for (Index m = 0; m < p.maps().size(); ++m)
        if (p.map(m).id == id) return m;
    throw CriterionFailure("fixture has no map " + id);
}

// ---- AC1 to AC6 ----------------------------------------------------------------

inline std::string snf_soundness(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> dim(1, 6);
    for (int trial = 0; trial < 1000; ++trial) {
        IntMatrix m = random::matrix(rng, dim(rng), dim(rng), 100);
        auto f = smith_normal_form(m);
        const std::string at = "matrix " + std::to_string(trial);
        expect(f.U * m * f.V == f.D, at + ": U M V != D");
        expect(abs_value(determinant(f.U)) == 1 && abs_value(determinant(f.V)) == 1, at + ": U or V not unimodular");
        expect(is_smith_diagonal(f.D), at + ": D is not a divisibility chain");
    }
    return "1000 random matrices up to 6x6 with entries up to 100";
}

inline std::string complex_sanity(std::uint64_t seed) {
    std::size_t checked = 0;
    std::mt19937_64 rng(seed);
    for (int trial = 0; trial < 50; ++trial) {
        random::complex(rng, 4).verify();
        ++checked;
        auto x = random::simplicial_set(rng, 4);
        for (const auto& a : coefficient_list()) {
            auto c = functions_cosimplicial(x, a);
            alternating_coface(c).verify();
            normalized_coface(c).complex.verify();
            checked += 2;
        }
    }
    for (const auto& f : valid_fixtures())
        for (Theory t : {Theory::PizQx, Theory::Kww}) {
            auto p = f.make();
            auto x = t == Theory::PizQx ? q_resolution(p, 4, default_simplex_cap).object
                                        : cech_of_nebula(p, 4, default_simplex_cap);
            auto c = functions_cosimplicial(x, FgAbGroup::integers());
            alternating_coface(c).verify();
            normalized_coface(c).complex.verify();
            checked += 2;
        }
    for (const auto& a : coefficient_list())
        for (std::size_t k = 0; k <= 3; ++k) {
            normalized_chain(em_object(a, k, k + 2)).complex.verify();
            ++checked;
        }
    return std::to_string(checked) + " complexes satisfy d d = 0";
}

inline std::string dold_kan_round_trip(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    for (int trial = 0; trial < 100; ++trial) {
        auto c = random::complex(rng, 4);
        std::string why;
        expect(check_gamma_round_trip(c, 5, &why), "complex " + std::to_string(trial) + ": " + why);
    }
    return "N(Gamma(C)) = C for 100 random complexes in degrees 0..4";
}

inline std::string coface_quasi_isomorphism(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const auto coeffs = coefficient_list();
    for (int trial = 0; trial < 100; ++trial) {
        auto x = random::simplicial_set(rng, 4);
        auto a = functions_cosimplicial(x, coeffs[static_cast<std::size_t>(trial) % coeffs.size()]);
        auto alt = alternating_coface(a);
        auto norm = normalized_coface(a).complex;
        for (int k = 0; k <= 3; ++k)
            expect(cohomology(alt, k) == cohomology(norm, k),
                   "input " + std::to_string(trial) + " degree " + std::to_string(k) + ": " +
                       cohomology(alt, k).to_string() + " vs " + cohomology(norm, k).to_string());
    }
    return "H^k(C A) = H^k(N A) for k <= 3 on 100 random inputs";
}

inline std::string delooping_shift() {
    std::size_t shifted = 0;
    auto shift = [&](const SimplicialAbGroup& g, std::size_t n_max, const std::string& name) {
        std::string why;
        expect(check_wbar_shift(g, n_max, &why), name + ": " + why);
        ++shifted;
    };
    for (const auto& a : coefficient_list()) {
        shift(SimplicialAbGroup::constant(a, 4), 5, "constant " + a.to_string());
        shift(em_object(a, 1, 4), 5, "K(" + a.to_string() + ",1)");
    }
    for (const auto& f : valid_fixtures()) {
        auto p = f.make();
        if (p.maps().size() > 12) continue;
        shift(SimplicialAbGroup::free_on(nerve(p.category(), 3)), 4, "free on the nerve of " + f.name);
    }
    for (const auto& a : coefficient_list())
        for (std::size_t k = 0; k <= 3; ++k) {
            auto h = moore_homotopy(wbar_iter(a, k, k + 2).object);
            for (std::size_t j = 0; j <= k; ++j)
                expect(h.groups[j] == (j == k ? a : FgAbGroup::trivial()),
                       "W̄^" + std::to_string(k) + " of " + a.to_string() + " has pi_" + std::to_string(j) + " = " +
                           h.groups[j].to_string());
        }
    return std::to_string(shifted) + " shifts N(W̄G) = N(G)[1]; W̄^k cA = Gamma(A[k]) for 4 groups and k <= 3";
}

inline std::string totalization_agreement(std::uint64_t seed) {
    const auto coeffs = coefficient_list();
    for (int trial = 0; trial < 100; ++trial) {
        std::mt19937_64 rng(seed + static_cast<std::uint64_t>(trial));
        const std::size_t k = static_cast<std::size_t>(trial) % 4;
        const auto& a = coeffs[(static_cast<std::size_t>(trial) / 4) % coeffs.size()];
        auto x = random::simplicial_set(rng, k + 2);
        auto tot = totalization_cohomology(x, a, k);
        auto direct = cohomology(normalized_coface(functions_cosimplicial(x, a)).complex, static_cast<int>(k));
        expect(tot == direct, "input " + std::to_string(trial) + " degree " + std::to_string(k) + ": " +
                                  tot.to_string() + " vs " + direct.to_string());
    }
    return "H^0 Tot = H^k(N A) on 100 random inputs, k <= 3";
}

// ---- AC7 to AC12 ---------------------------------------------------------------

inline std::string circle_fixtures() {
    struct Case {
        std::string name;
        PlotPresentation p;
        SimplicialComplex underlying;
    };
    std::vector<Case> cases{{"circ2", fixtures::circ2(), oracles::square_boundary()},
                            {"circ4", fixtures::circ4(), oracles::square_boundary()},
                            {"sph_oct", fixtures::sph_oct(), octahedron_boundary()}};
    for (const auto& c : cases) {
        const auto oracle = oracles::simplicial_betti(c.underlying);
        expect(oracle.torsion_free, c.name + ": the oracle found torsion");
        for (Theory t : {Theory::PizQx, Theory::Kww, Theory::Tot}) {
            auto reports = theory_reports(c.p, FgAbGroup::integers(), t, 2);
            for (std::size_t k = 0; k <= 2; ++k) {
                const auto expected = FgAbGroup::integers(k < oracle.betti.size() ? oracle.betti[k] : 0);
                const auto& r = reports[k];
                const std::string at = c.name + " " + theory_tag(t) + " H^" + std::to_string(k);
                expect(r.answer.has_value(), at + ": " + r.error);
                expect(*r.answer == expected, at + " = " + r.answer->to_string() + ", oracle " + expected.to_string());
            }
        }
    }
    return "circ2, circ4 (Z, Z, 0) and sph_oct (Z, 0, Z) under PIZ-QX, KWW and TOT match simplicial Betti numbers";
}

inline std::string bundle_classification() {
    auto p = fixtures::circ2();
    auto check_count = [](const PlotPresentation& q, const FiniteGroup& g, const Classification& c, const std::string& at) {
        const std::size_t oracle = oracles::labelling_orbits(q, g);
        expect(c.classes.size() == oracle, at + ": " + std::to_string(c.classes.size()) + " classes, oracle " +
                                               std::to_string(oracle));
        expect(c.law_violations.empty(), at + ": " + (c.law_violations.empty() ? "" : c.law_violations.front()));
        expect(c.problems.empty(), at + ": " + (c.problems.empty() ? "" : c.problems.front()));
    };
    const auto z2 = classify_bundles(p, FiniteGroup::cyclic(2));
    check_count(p, FiniteGroup::cyclic(2), z2, "circ2 Z/2");
    expect(z2.classes.size() == 2, "circ2 Z/2 does not give 2 classes");
    const auto z3 = classify_bundles(p, FiniteGroup::cyclic(3));
    check_count(p, FiniteGroup::cyclic(3), z3, "circ2 Z/3");
    expect(z3.classes.size() == 3, "circ2 Z/3 does not give 3 classes");
    const auto s3g = FiniteGroup::symmetric(3);
    const auto s3 = classify_bundles(p, s3g);
    check_count(p, s3g, s3, "circ2 S_3");
    std::multiset<std::size_t> orders;
    for (const auto& c : s3.classes) orders.insert(c.gauge.order);
    expect(orders == std::multiset<std::size_t>{2, 3, 6}, "circ2 S_3 gauge orders are not 6, 2, 3");
    auto d = fixtures::disc2();
    for (const auto& g : {FiniteGroup::cyclic(2), FiniteGroup::cyclic(3), s3g}) {
        const auto c = classify_bundles(d, g);
        const std::string at = "disc2 |G|=" + std::to_string(g.order());
        check_count(d, g, c, at);
        expect(c.classes.size() == 1, at + ": not a single class");
        expect(c.classes[0].gauge.order == g.order() * g.order(), at + ": gauge group is not G x G");
        expect(c.classes[0].gauge.abelian == (g.order() != 6), at + ": gauge group commutativity differs from G x G");
    }
    return "circ2: Z/2 -> 2, Z/3 -> 3, S_3 -> 3 with gauge orders 6, 2, 3; disc2: 1 class with gauge G x G; "
           "counts match labelling orbits";
}

inline std::string mobius_census() {
    auto p = fixtures::circ2();
    const auto g = FiniteGroup::cyclic(2);
    auto trivial = trivial_cocycle(p, g);
    auto twisted = trivial;
    twisted.labels[map_named(p, "P2→V")][0] = 1;
    const auto flat = bundle_from_plot_cocycle(p, g, trivial);
    const auto mobius = bundle_from_plot_cocycle(p, g, twisted);
    expect(mobius.total.component_count() == 1,
           "twisted total space has " + std::to_string(mobius.total.component_count()) + " components");
    expect(flat.total.component_count() == 2,
           "trivial total space has " + std::to_string(flat.total.component_count()) + " components");
    for (const auto* b : {&flat, &mobius}) {
        auto v = verify_principal(p, *b);
        expect(v.empty(), v.empty() ? "" : v.front().kind + ": " + v.front().message);
    }
    return "twisted Z/2 cocycle on circ2 gives 1 component, trivial gives 2; both principal";
}

inline std::string coskeletality() {
    std::size_t checked = 0;
    auto check = [&](const FinCategory& c, const std::string& name) {
        auto n = nerve(c, 4);
        expect(verify_simplicial_identities(n).empty(), name + ": nerve violates a simplicial identity");
        auto r = is_k_coskeletal(n, 2, 4);
        expect(r.holds, name + ": a boundary in degree " + std::to_string(r.degree) + " lacks a unique filler");
        ++checked;
    };
    for (const auto& f : valid_fixtures()) check(f.make().category(), f.name);
    for (const auto& g : {FiniteGroup::cyclic(2), FiniteGroup::cyclic(3), FiniteGroup::symmetric(3)})
        check(g.as_category(), "BG for |G|=" + std::to_string(g.order()));
    for (const auto& g : {FiniteGroup::cyclic(2), FiniteGroup::cyclic(3), FiniteGroup::symmetric(3)}) {
        check(CocycleGroupoid(fixtures::pt(), g).category(), "cocycles on pt, |G|=" + std::to_string(g.order()));
        check(CocycleGroupoid(fixtures::disc2(), g).category(), "cocycles on disc2, |G|=" + std::to_string(g.order()));
    }
    // The full groupoid on circ2 has 256 arrows and about 10^6 4-simplices; the gauge
    // transformations fixing U and V give a subgroupoid with a small nerve.
    auto p = fixtures::circ2();
    CocycleGroupoid cg(p, FiniteGroup::cyclic(2));
    ComponentIndex ci(p);
    std::vector<std::size_t> sub;
    for (std::size_t i = 0; i < cg.gauge_order(); ++i) {
        auto h = cg.gauge_element(i);
        if (h.values[ci.offset[p.probe_index("U")]] == 0 && h.values[ci.offset[p.probe_index("V")]] == 0) sub.push_back(i);
    }
    check(cg.category(sub), "circ2 Z/2 cocycles under point gauges");
    return std::to_string(checked) + " nerves are 2-coskeletal through degree 4";
}

inline std::string phi_psi_diagnostic(const std::string& golden_dir) {
    for (auto make : {fixtures::pt, fixtures::disc2}) {
        auto r = phi_psi_compare(make(), 3);
        for (const auto& d : r.degrees)
            expect(d.isomorphism(), "phi/psi is not an isomorphism in degree " + std::to_string(d.degree));
    }
    auto r = phi_psi_compare(fixtures::circ2(), 2);
    for (const auto& d : r.degrees)
        expect(d.phi_defined || !d.phi_witness.empty(), "circ2 degree " + std::to_string(d.degree) + ": no verdict");
    const std::string text = phi_psi_to_json(r).dump(2) + "\n";
    std::ifstream in(golden_dir + "/circ2_phi_psi.json", std::ios::binary);
    expect(static_cast<bool>(in), "golden file circ2_phi_psi.json not found in " + golden_dir);
    std::stringstream golden;
    golden << in.rdbuf();
    expect(golden.str() == text, "circ2 report differs from the golden file");
    return "iso on pt and disc2; circ2 verdict and census match the golden report";
}

/// Everything a run reports, serialized; computed twice and compared byte for byte.
inline std::string determinism(std::uint64_t seed) {
    auto digest = [seed] {
        std::string s;
        for (const auto& f : valid_fixtures())
            s += comparison_to_json(compare_theories(f.make(), FgAbGroup::parse("Z+Z/2"), 1)).dump();
        auto p = fixtures::circ2();
        const auto g = FiniteGroup::symmetric(3);
        s += classification_to_json(p, classify_bundles(p, g), g).dump();
        s += phi_psi_to_json(phi_psi_compare(p, 2)).dump();
        std::mt19937_64 rng(seed);
        for (int i = 0; i < 10; ++i) s += dump_presentation(random::presentation(rng));
        return s;
    };
    const auto first = digest();
    expect(first == digest(), "two runs differ");
    return "comparison, classification, phi/psi and random presentations are byte-identical across runs";
}

}  // namespace detail

/// Runs all twelve criteria. A criterion that throws fails with the message as its detail.
inline std::vector<CriterionResult> run(std::uint64_t seed, const std::string& golden_dir,
                                        const std::function<void(const CriterionResult&)>& progress = {}) {
    struct Criterion {
        std::string title;
        double budget;
        std::function<std::string()> body;
    };
    const std::vector<Criterion> criteria{
        {"SNF soundness", 10, [=] { return detail::snf_soundness(seed); }},
        {"complex sanity", 0, [=] { return detail::complex_sanity(seed + 2); }},
        {"Dold-Kan round trip", 0, [=] { return detail::dold_kan_round_trip(seed + 3); }},
        {"coface quasi-isomorphism", 0, [=] { return detail::coface_quasi_isomorphism(seed + 4); }},
        {"delooping shift", 0, [] { return detail::delooping_shift(); }},
        {"totalization", 60, [=] { return detail::totalization_agreement(seed + 6); }},
        {"circle fixtures", 120, [] { return detail::circle_fixtures(); }},
        {"bundle classification", 0, [] { return detail::bundle_classification(); }},
        {"Mobius census", 0, [] { return detail::mobius_census(); }},
        {"coskeletality", 0, [] { return detail::coskeletality(); }},
        {"phi/psi diagnostic", 0, [=] { return detail::phi_psi_diagnostic(golden_dir); }},
        {"determinism", 0, [=] { return detail::determinism(seed + 12); }},
    };
    std::vector<CriterionResult> out;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        CriterionResult r;
        r.id = static_cast<int>(i + 1);
        r.title = criteria[i].title;
        r.budget = criteria[i].budget;
        const auto start = std::chrono::steady_clock::now();
        try {
            r.detail = criteria[i].body();
            r.passed = true;
        } catch (const std::exception& e) {
            r.detail = e.what();
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (r.passed && r.budget > 0 && r.seconds > r.budget) {
            r.passed = false;
            r.detail = "over the " + std::to_string(static_cast<int>(r.budget)) + " s budget";
        }
        if (progress) progress(r);
        out.push_back(std::move(r));
    }
    return out;
}

inline std::string result_line(const CriterionResult& r) {
    return "AC" + std::to_string(r.id) + (r.id < 10 ? "  " : " ") + (r.passed ? "PASS" : "FAIL") + "  " + r.title +
           ": " + r.detail;
}

inline std::string report_text(const std::vector<CriterionResult>& results) {
    std::string s;
    std::size_t passed = 0;
    for (const auto& r : results) {
        s += result_line(r) + "\n";
        passed += r.passed;
    }
    return s + std::to_string(passed) + "/" + std::to_string(results.size()) + " criteria passed\n";
}

inline nlohmann::ordered_json report_json(const std::vector<CriterionResult>& results, std::uint64_t seed) {
    nlohmann::ordered_json j;
    j["report"] = "selftest";
    j["seed"] = seed;
    j["criteria"] = nlohmann::ordered_json::array();
    std::size_t passed = 0;
    for (const auto& r : results) {
        j["criteria"].push_back({{"id", "AC" + std::to_string(r.id)}, {"title", r.title}, {"passed", r.passed},
                                 {"detail", r.detail}});
        passed += r.passed;
    }
    j["passed"] = passed;
    j["total"] = results.size();
    return j;
}

inline bool all_passed(const std::vector<CriterionResult>& results) {
    for (const auto& r : results)
        if (!r.passed) return false;
    return true;
}

}  // namespace diffcech::acceptance
