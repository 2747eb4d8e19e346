/**
 * The cohomology pipelines on a plot presentation and their comparison.
 *
 *   PIZ-QX   H^k of the normalized coface complex of functions on QX
 *   PIZ-BM   the same on the bar construction B//M of the gauge monoid
 *   KWW      the same on the Čech nerve of the nebula over X
 *   TOT      H^0 of the total complex of N^co(functions on QX) ⊗ N(Γ(A[k]))
 *
 * Every route works on an n_max-truncation with n_max >= k + 2. Coefficients are
 * finitely generated abelian groups; the real line with the discrete topology is
 * represented by Z, whose free ranks give the real Betti numbers on these complexes.
 */
#pragma once

#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dold_kan.hpp"
#include "phi_psi.hpp"
#include "site.hpp"

namespace diffcech {

enum class Theory { PizQx, PizBm, Kww, Tot };

inline const std::vector<Theory>& all_theories() {
    static const std::vector<Theory> t{Theory::PizQx, Theory::PizBm, Theory::Kww, Theory::Tot};
    return t;
}

inline std::string theory_tag(Theory t) {
    switch (t) {
        case Theory::PizQx: return "PIZ-QX";
        case Theory::PizBm: return "PIZ-BM";
        case Theory::Kww: return "KWW";
        case Theory::Tot: return "TOT";
    }
    return "?";
}

/// Accepts the tags above and the command-line spellings piz-qx, piz-bm, kww, tot.
inline Theory parse_theory(const std::string& s) {
    std::string up;
    for (char ch : s) up += static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    for (Theory t : all_theories())
        if (theory_tag(t) == up) return t;
    throw MalformedInput("unknown theory '" + s + "' (expected piz-qx, piz-bm, kww or tot)");
}

/// Simplices allowed per degree in any route. The cosimplicial matrices built on top grow much
/// faster than the simplex counts, so this sits well below the constructors' own caps.
inline constexpr std::size_t default_simplex_cap = 200000;

struct CohomologyReport {
    Theory theory = Theory::Tot;
    std::size_t degree = 0;
    FgAbGroup coefficients;
    std::optional<FgAbGroup> answer;  // absent exactly when `error` is set
    std::string error;
    std::vector<std::string> caveats;
    nlohmann::ordered_json census = nlohmann::ordered_json::object();
};

namespace detail {

inline std::string truncation_caveat(std::size_t n_max) {
    return "computed on the " + std::to_string(n_max) + "-truncation";
}

/// Simplicial set underlying a theory, with census and caveats shared by every degree.
struct TheoryInput {
    TruncatedSimplicialSet x;
    std::vector<std::string> caveats;
    nlohmann::ordered_json census = nlohmann::ordered_json::object();
};

inline TheoryInput theory_input(const PlotPresentation& p, Theory t, std::size_t n_max, std::size_t cap) {
    TheoryInput in;
    switch (t) {
        case Theory::PizQx:
        case Theory::Tot:
            in.x = q_resolution(p, n_max, cap).object;
            break;
        case Theory::Kww:
            in.x = cech_of_nebula(p, n_max, cap);
            break;
        case Theory::PizBm: {
            const Nebula n = nebula(p);
            const GaugeMonoid m = gauge_monoid(n);
            in.census["gauge_order"] = m.order();
            in.caveats.push_back("M carries the discrete structure: each gauge element is its own component");
            try {
                auto pp = phi_psi_compare(p, std::min<std::size_t>(n_max, 1));
                for (const auto& d : pp.degrees)
                    if (!d.phi_defined)
                        in.caveats.push_back("phi_" + std::to_string(d.degree) + " is undefined: " + d.phi_witness);
            } catch (const ResourceLimit&) {
                in.caveats.push_back("the comparison map QX -> B//M was too large to check");
            }
            in.x = bar_construction(n, m, n_max, cap);
            break;
        }
    }
    std::vector<std::size_t> components;
    for (std::size_t k = 0; k <= n_max; ++k) components.push_back(in.x.component_count(k));
    in.census["components"] = components;
    return in;
}

inline std::vector<std::size_t> complex_ranks(const CochainComplex& c) {
    std::vector<std::size_t> r;
    for (int n = c.lo(); n <= c.hi(); ++n) r.push_back(c.rank(n));
    return r;
}

/// Γ(A[k]) against functions on X: D^{p,q} = N^co(Z^X)^p ⊗ N_q(Γ(A[k])), total degree p - q.
inline FgAbGroup tot_degree(const NormalizedCoface& c, const FgAbGroup& a, std::size_t k, std::size_t n_max,
                            nlohmann::ordered_json& census, std::vector<std::string>& caveats) {
    const auto em = em_object(a, k, n_max);
    const auto nk = normalized_chain(em);
    const int top = static_cast<int>(n_max);
    std::vector<std::size_t> em_ranks;
    for (int q = 0; q <= top; ++q) em_ranks.push_back(nk.complex.rank(q));
    census["em_normalized_ranks"] = em_ranks;
    if (nk.complex.rank(top) != 0) caveats.push_back("N(Γ(A[k])) is nonzero at the truncation bound");
    DoubleComplex d(0, top, 0, top, a);
    for (int p = 0; p <= top; ++p)
        for (int q = 0; q <= top; ++q) d.set_rank(p, q, c.complex.rank(p) * nk.complex.rank(q));
    for (int p = 0; p <= top; ++p)
        for (int q = 0; q <= top; ++q) {
            if (d.rank(p, q) == 0) continue;
            if (p < top) d.set_horizontal(p, q, kronecker(c.complex.differential(p), IntMatrix::identity(nk.complex.rank(q))));
            if (q > 0) d.set_vertical(p, q, kronecker(IntMatrix::identity(c.complex.rank(p)), nk.complex.boundary(q)));
        }
    d.verify();
    auto tot = total_cochain_complex(d);
    census["total_ranks"] = complex_ranks(tot);
    return cohomology(tot, 0);
}

}  // namespace detail

/// H^0 of the total complex of functions on x with values in Γ(A[k]); needs x.n_max() >= k + 2.
inline FgAbGroup totalization_cohomology(const TruncatedSimplicialSet& x, const FgAbGroup& a, std::size_t k) {
    if (x.n_max() < k + 2)
        throw BoundError("degree " + std::to_string(k) + " needs a " + std::to_string(k + 2) + "-truncation, got " +
                         std::to_string(x.n_max()));
    nlohmann::ordered_json census;
    std::vector<std::string> caveats;
    return detail::tot_degree(normalized_coface(functions_cosimplicial(x, FgAbGroup::integers())), a, k, x.n_max(),
                              census, caveats);
}

/// Reports for degrees 0..k_max of one theory, sharing the underlying construction. Resource
/// limits become per-report errors; malformed input still throws.
inline std::vector<CohomologyReport> theory_reports(const PlotPresentation& p, const FgAbGroup& a, Theory t,
                                                    std::size_t k_max, std::size_t cap = default_simplex_cap) {
    const std::size_t n_max = k_max + 2;
    std::vector<CohomologyReport> out(k_max + 1);
    for (std::size_t k = 0; k <= k_max; ++k) {
        out[k].theory = t;
        out[k].degree = k;
        out[k].coefficients = a;
    }
    try {
        auto in = detail::theory_input(p, t, n_max, cap);
        auto c = functions_cosimplicial(in.x, t == Theory::Tot ? FgAbGroup::integers() : a);
        auto norm = normalized_coface(c);
        std::optional<CochainComplex> alt;
        if (t != Theory::Tot) alt = alternating_coface(c);
        in.census["normalized_ranks"] = detail::complex_ranks(norm.complex);
        for (std::size_t k = 0; k <= k_max; ++k) {
            auto& r = out[k];
            r.census = in.census;
            r.caveats = in.caveats;
            r.caveats.push_back(detail::truncation_caveat(n_max));
            if (t == Theory::Tot) {
                r.answer = detail::tot_degree(norm, a, k, n_max, r.census, r.caveats);
            } else {
                r.answer = cohomology(norm.complex, static_cast<int>(k));
                const bool agree = cohomology(*alt, static_cast<int>(k)) == *r.answer;
                r.census["alternating_cross_check"] = agree ? "agree" : "disagree";
                if (!agree) r.caveats.push_back("alternating coface cohomology differs from the normalized one");
            }
        }
    } catch (const ResourceLimit& e) {
        for (auto& r : out) {
            r.answer.reset();
            r.error = std::string("resource limit: ") + e.what();
        }
    }
    return out;
}

/// TOT reports annotated with the PIZ-QX answers; other theories are returned unchanged.
inline std::vector<CohomologyReport> cross_checked_reports(const PlotPresentation& p, const FgAbGroup& a, Theory t,
                                                           std::size_t k_max, std::size_t cap = default_simplex_cap) {
    auto out = theory_reports(p, a, t, k_max, cap);
    if (t != Theory::Tot) return out;
    const auto qx = theory_reports(p, a, Theory::PizQx, k_max, cap);
    for (std::size_t k = 0; k <= k_max; ++k) {
        auto& r = out[k];
        if (!r.answer || !qx[k].answer) {
            r.census["piz_qx_cross_check"] = "not computed";
        } else if (*r.answer == *qx[k].answer) {
            r.census["piz_qx_cross_check"] = "agree";
        } else {
            r.census["piz_qx_cross_check"] = "disagree";
            r.caveats.push_back("PIZ-QX gives " + qx[k].answer->to_string());
        }
    }
    return out;
}

inline CohomologyReport theory_cohomology(const PlotPresentation& p, const FgAbGroup& a, std::size_t k, Theory t,
                                          std::size_t n_max = 0, std::size_t cap = default_simplex_cap) {
    if (n_max != 0 && n_max < k + 2) throw BoundError("degree " + std::to_string(k) + " needs n_max >= " + std::to_string(k + 2));
    return theory_reports(p, a, t, n_max == 0 ? k : n_max - 2, cap)[k];
}

inline CohomologyReport piz_cohomology(const PlotPresentation& p, const FgAbGroup& a, std::size_t k,
                                       bool bar_route = false, std::size_t n_max = 0) {
    return theory_cohomology(p, a, k, bar_route ? Theory::PizBm : Theory::PizQx, n_max);
}

inline CohomologyReport kww_cohomology(const PlotPresentation& p, const FgAbGroup& a, std::size_t k, std::size_t n_max = 0) {
    return theory_cohomology(p, a, k, Theory::Kww, n_max);
}

inline CohomologyReport tot_cohomology(const PlotPresentation& p, const FgAbGroup& a, std::size_t k, std::size_t n_max = 0) {
    return theory_cohomology(p, a, k, Theory::Tot, n_max);
}

struct ComparisonRow {
    std::size_t degree = 0;
    std::map<Theory, CohomologyReport> cells;
    bool agree = true;  // all computed answers coincide
};

struct Comparison {
    FgAbGroup coefficients;
    std::vector<Theory> theories;
    std::vector<ComparisonRow> rows;
};

/// Tabulates the chosen theories in degrees 0..k_max. Disagreements are recorded, never raised.
inline Comparison compare_theories(const PlotPresentation& p, const FgAbGroup& a, std::size_t k_max,
                                   bool include_bar = false) {
    Comparison c;
    c.coefficients = a;
    for (Theory t : all_theories())
        if (t != Theory::PizBm || include_bar) c.theories.push_back(t);
    c.rows.resize(k_max + 1);
    for (std::size_t k = 0; k <= k_max; ++k) c.rows[k].degree = k;
    for (Theory t : c.theories) {
        auto reports = theory_reports(p, a, t, k_max);
        for (std::size_t k = 0; k <= k_max; ++k) c.rows[k].cells.emplace(t, std::move(reports[k]));
    }
    for (auto& row : c.rows) {
        std::optional<FgAbGroup> first;
        for (const auto& [t, r] : row.cells) {
            if (!r.answer) continue;
            if (!first)
                first = r.answer;
            else if (!(*first == *r.answer))
                row.agree = false;
        }
    }
    return c;
}

// ---- Reports -------------------------------------------------------------------

inline nlohmann::ordered_json report_to_json(const CohomologyReport& r) {
    nlohmann::ordered_json j;
    j["theory"] = theory_tag(r.theory);
    j["degree"] = r.degree;
    j["coefficients"] = r.coefficients.to_string();
    if (r.answer) {
        j["answer"] = r.answer->to_string();
        j["free_rank"] = r.answer->free_rank();
        j["torsion"] = nlohmann::ordered_json::array();
        for (const auto& t : r.answer->torsion()) j["torsion"].push_back(detail::integer_json(t));
    } else {
        j["answer"] = nullptr;
        j["free_rank"] = nullptr;
        j["torsion"] = nullptr;
        j["error"] = r.error;
    }
    j["caveats"] = r.caveats;
    j["census"] = r.census;
    return j;
}

inline std::string report_to_text(const CohomologyReport& r) {
    std::ostringstream os;
    os << theory_tag(r.theory) << ": H^" << r.degree << " = ";
    if (r.answer)
        os << r.answer->to_string();
    else
        os << "not computed (" << r.error << ")";
    os << "\n";
    for (const auto& c : r.caveats) os << "  note: " << c << "\n";
    return os.str();
}

inline nlohmann::ordered_json comparison_to_json(const Comparison& c) {
    nlohmann::ordered_json j;
    j["report"] = "compare";
    j["coefficients"] = c.coefficients.to_string();
    j["theories"] = nlohmann::ordered_json::array();
    for (Theory t : c.theories) j["theories"].push_back(theory_tag(t));
    j["degrees"] = nlohmann::ordered_json::array();
    for (const auto& row : c.rows) {
        nlohmann::ordered_json rj;
        rj["degree"] = row.degree;
        rj["agree"] = row.agree;
        rj["reports"] = nlohmann::ordered_json::array();
        for (Theory t : c.theories) rj["reports"].push_back(report_to_json(row.cells.at(t)));
        j["degrees"].push_back(std::move(rj));
    }
    return j;
}

/// One line per degree, one column per theory.
inline std::string comparison_to_text(const Comparison& c) {
    std::vector<std::vector<std::string>> table;
    std::vector<std::string> head{"k"};
    for (Theory t : c.theories) head.push_back(theory_tag(t));
    head.push_back("agree");
    table.push_back(head);
    for (const auto& row : c.rows) {
        std::vector<std::string> line{std::to_string(row.degree)};
        for (Theory t : c.theories) {
            const auto& r = row.cells.at(t);
            line.push_back(r.answer ? r.answer->to_string() : "-");
        }
        line.push_back(row.agree ? "yes" : "NO");
        table.push_back(line);
    }
    std::vector<std::size_t> width(head.size(), 0);
    for (const auto& line : table)
        for (std::size_t i = 0; i < line.size(); ++i) width[i] = std::max(width[i], line[i].size());
    std::ostringstream os;
    os << "coefficients " << c.coefficients.to_string() << "\n";
    for (const auto& line : table) {
        for (std::size_t i = 0; i < line.size(); ++i) {
            os << line[i];
            if (i + 1 < line.size()) os << std::string(width[i] - line[i].size() + 2, ' ');
        }
        os << "\n";
    }
    return os.str();
}

}  // namespace diffcech
