/**
 * Dold–Kan machinery on free skeletons: the normalized chain functor N, its
 * inverse Γ, alternating and normalized coface complexes, Eilenberg–MacLane
 * objects Γ(A[k]) and the W̄ delooping.
 */
#pragma once

#include <map>
#include <string>
#include <vector>

#include "simplicial_ab.hpp"

namespace diffcech {

/// A monotone map [a] -> [b] given by its values.
using Monotone = std::vector<std::size_t>;

namespace detail {

/// All monotone surjections out of [n], identity first, then by decreasing target size.
inline std::vector<Monotone> surjections_from(std::size_t n) {
    std::vector<Monotone> out;
    for (std::size_t m = n + 1; m-- > 0;) {
        // Choose which of the n steps j-1 -> j increase the value; exactly m of them do.
        std::vector<Monotone> level;
        for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << n); ++mask) {
            if (static_cast<std::size_t>(__builtin_popcountll(mask)) != m) continue;
            Monotone s(n + 1, 0);
            for (std::size_t j = 1; j <= n; ++j) s[j] = s[j - 1] + ((mask >> (j - 1)) & 1);
            level.push_back(std::move(s));
        }
        std::sort(level.begin(), level.end());
        out.insert(out.end(), level.begin(), level.end());
    }
    return out;
}

/// Epi-mono factorization: c = mu ∘ eps with eps surjective onto [image size - 1].
inline void epi_mono(const Monotone& c, Monotone& eps, Monotone& mu) {
    mu.clear();
    eps.assign(c.size(), 0);
    for (std::size_t j = 0; j < c.size(); ++j) {
        if (mu.empty() || mu.back() != c[j]) mu.push_back(c[j]);
        eps[j] = mu.size() - 1;
    }
}

inline Monotone coface_map(std::size_t n, std::size_t i) {  // δ^i : [n-1] -> [n]
    Monotone d(n);
    for (std::size_t j = 0; j < n; ++j) d[j] = j < i ? j : j + 1;
    return d;
}

inline Monotone codegeneracy_map(std::size_t n, std::size_t i) {  // σ^i : [n+1] -> [n]
    Monotone s(n + 2);
    for (std::size_t j = 0; j <= n + 1; ++j) s[j] = j <= i ? j : j - 1;
    return s;
}

}  // namespace detail

/// Matrix of the simplicial operator θ^* : G_b -> G_a for a monotone θ : [a] -> [b].
inline IntMatrix simplicial_operator(const SimplicialAbGroup& g, Monotone theta, std::size_t b) {
    IntMatrix result = IntMatrix::identity(g.rank(b));
    std::size_t top = b;
    // Strip missing values (faces), largest first; θ = θ' ∘ ... so faces act first.
    for (std::size_t j = b + 1; j-- > 0;) {
        if (std::find(theta.begin(), theta.end(), j) != theta.end()) continue;
        result = g.face(top, j) * result;
        for (auto& v : theta)
            if (v > j) --v;
        --top;
    }
    // θ is now surjective onto [top]; peel repeated values from the left, each a degeneracy.
    std::vector<std::size_t> degens;
    while (true) {
        std::size_t j = 0;
        while (j + 1 < theta.size() && theta[j] != theta[j + 1]) ++j;
        if (j + 1 >= theta.size()) break;
        degens.push_back(j);
        theta.erase(theta.begin() + static_cast<std::ptrdiff_t>(j) + 1);
    }
    // σ = σ' ∘ σ^{j_1} with σ' peeled next, so σ^* = s_{j_1} ∘ σ'^* and the last peeled acts first.
    for (std::size_t t = degens.size(); t-- > 0;) {
        result = g.degeneracy(top, degens[t]) * result;
        ++top;
    }
    return result;
}

/// Γ(C) truncated at n_max: degree n is ⊕_{σ : [n] ↠ [m]} C_m.
inline SimplicialAbGroup gamma(const ChainComplex& c, std::size_t n_max) {
    if (!c.empty() && c.lo() < 0) throw MalformedInput("gamma needs a complex concentrated in degrees >= 0");
    auto crank = [&](std::size_t m) { return c.rank(static_cast<int>(m)); };
    std::vector<std::vector<Monotone>> surj(n_max + 2);
    std::vector<std::map<Monotone, std::size_t>> offset(n_max + 2);
    std::vector<std::size_t> ranks;
    for (std::size_t n = 0; n <= n_max + 1; ++n) {
        surj[n] = detail::surjections_from(n);
        std::size_t total = 0;
        for (const auto& s : surj[n]) {
            offset[n][s] = total;
            total += crank(s.back());
        }
        if (n <= n_max) ranks.push_back(total);
    }
    SimplicialAbGroup g(ranks, c.coefficients());
    auto op = [&](std::size_t n_from, std::size_t n_to, const Monotone& theta) {
        IntMatrix m(ranks[n_to], ranks[n_from]);
        Monotone eps, mu;
        for (const auto& s : surj[n_from]) {
            const std::size_t mdim = s.back();
            if (crank(mdim) == 0) continue;
            Monotone comp(theta.size());
            for (std::size_t j = 0; j < theta.size(); ++j) comp[j] = s[theta[j]];
            detail::epi_mono(comp, eps, mu);
            const std::size_t col = offset[n_from].at(s);
            const std::size_t mprime = mu.size() - 1;
            if (mprime == mdim) {
                m.place(IntMatrix::identity(crank(mdim)), offset[n_to].at(eps), col);
            } else if (mprime + 1 == mdim && mu.front() == 1) {
                if (crank(mprime) > 0) m.place(c.boundary(static_cast<int>(mdim)), offset[n_to].at(eps), col);
            }
        }
        return m;
    };
    for (std::size_t n = 0; n <= n_max; ++n) {
        for (std::size_t i = 0; n > 0 && i <= n; ++i) g.set_face(n, i, op(n, n - 1, detail::coface_map(n, i)));
        for (std::size_t i = 0; n < n_max && i <= n; ++i) g.set_degeneracy(n, i, op(n, n + 1, detail::codegeneracy_map(n, i)));
    }
    return g;
}

struct NormalizedChain {
    ChainComplex complex;
    std::vector<IntMatrix> basis;  // lattice basis of N_n inside G_n, as columns
};

/// N(G) as ∩ ker d_i (i >= 1) with differential d_0. Also checks that the kernel is a
/// complement of the degenerate subgroup, so it maps isomorphically onto G_n / D_n.
inline NormalizedChain normalized_chain(const SimplicialAbGroup& g, bool check_quotient = true) {
    g.verify();
    auto m = moore_complex(g);
    if (check_quotient) {
        for (std::size_t n = 1; n <= g.n_max(); ++n) {
            IntMatrix gens = m.basis[n];
            for (std::size_t i = 0; i < n; ++i) gens = hstack(gens, g.degeneracy(n - 1, i));
            auto inv = smith_invariants(gens);
            bool unimodular_span = inv.size() == g.rank(n) &&
                                   std::all_of(inv.begin(), inv.end(), [](const Integer& d) { return d == 1; });
            std::size_t degenerate_rank = matrix_rank(gens.block(0, g.rank(n), m.basis[n].cols(), gens.cols() - m.basis[n].cols()));
            if (!unimodular_span || degenerate_rank + m.basis[n].cols() != g.rank(n))
                throw MalformedInput("normalized chains are not a complement of the degenerate subgroup in degree " +
                                     std::to_string(n));
        }
    }
    return {std::move(m.complex), std::move(m.basis)};
}

/// Embedding of C_n into Γ(C)_n as the summand of the identity surjection.
inline IntMatrix gamma_identity_summand(const ChainComplex& c, std::size_t n) {
    std::size_t total = 0;
    for (const auto& s : detail::surjections_from(n)) total += c.rank(static_cast<int>(s.back()));
    IntMatrix j(total, c.rank(static_cast<int>(n)));
    j.place(IntMatrix::identity(c.rank(static_cast<int>(n))), 0, 0);
    return j;
}

/// Checks N(Γ C) = C under the identity-summand embedding: it lands in the normalized
/// chains, spans them, and intertwines d_0 with the differential of C exactly.
inline bool check_gamma_round_trip(const ChainComplex& c, std::size_t n_max, std::string* why = nullptr) {
    auto fail = [&](const std::string& s) {
        if (why) *why = s;
        return false;
    };
    auto g = gamma(c, n_max);
    auto nc = normalized_chain(g);
    for (std::size_t n = 0; n <= n_max; ++n) {
        IntMatrix j = gamma_identity_summand(c, n);
        if (nc.basis[n].cols() != c.rank(static_cast<int>(n))) return fail("rank differs in degree " + std::to_string(n));
        for (std::size_t i = 1; i <= n; ++i)
            if (!(g.face(n, i) * j).is_zero()) return fail("identity summand not normalized in degree " + std::to_string(n));
        if (!solve_in_lattice(j, nc.basis[n]) || !solve_in_lattice(nc.basis[n], j))
            return fail("identity summand does not span N in degree " + std::to_string(n));
        if (n > 0 && !(g.face(n, 0) * j == gamma_identity_summand(c, n - 1) * c.boundary(static_cast<int>(n))))
            return fail("d_0 differs from the differential in degree " + std::to_string(n));
    }
    return true;
}

/// Γ(A[k]) truncated at n_max; requires n_max >= k + 2.
inline SimplicialAbGroup em_object(const FgAbGroup& a, std::size_t k, std::size_t n_max) {
    if (n_max < k + 2) throw BoundError("em_object needs n_max >= k + 2");
    return gamma(ChainComplex::concentrated(static_cast<int>(k), 1, a), n_max);
}

/// Alternating coface complex: A^k with d = Σ (-1)^i d^i.
inline CochainComplex alternating_coface(const CosimplicialAbGroup& a) {
    a.verify();
    std::vector<IntMatrix> maps;
    for (std::size_t k = 0; k < a.n_max(); ++k) {
        IntMatrix d(a.rank(k + 1), a.rank(k));
        for (std::size_t i = 0; i <= k + 1; ++i) d.place(a.coface(k, i), 0, 0, (i % 2 == 0) ? 1 : -1);
        maps.push_back(std::move(d));
    }
    CochainComplex c(0, a.ranks(), std::move(maps), a.coefficients());
    c.verify();
    return c;
}

struct NormalizedCoface {
    CochainComplex complex;
    std::vector<IntMatrix> basis;  // lattice basis of N^k inside A^k, as columns
    bool coordinate = false;       // true when every N^k is spanned by standard basis vectors
};

namespace detail {

/// Row-wise selection matrix test: every row a single entry equal to 1.
inline bool is_selection(const IntMatrix& m) {
    for (std::size_t r = 0; r < m.rows(); ++r) {
        const auto& row = m.row(r);
        if (row.size() != 1 || row.vals[0] != 1) return false;
    }
    return true;
}

}  // namespace detail

/// N^k = ∩_j ker s^j with the restricted alternating differential. When the codegeneracies are
/// pullbacks along maps (functions on a simplicial set) the kernel is the coordinate subspace of
/// functions vanishing on degenerate components, and the differential is a submatrix.
inline NormalizedCoface normalized_coface(const CosimplicialAbGroup& a) {
    auto alt = alternating_coface(a);
    const std::size_t top = a.n_max();
    bool coordinate = true;
    for (std::size_t k = 1; k <= top && coordinate; ++k)
        for (std::size_t j = 0; j < k && coordinate; ++j) coordinate = detail::is_selection(a.codegeneracy(k, j));
    NormalizedCoface out{CochainComplex(), {}, coordinate};
    std::vector<std::size_t> ranks;
    std::vector<IntMatrix> maps;
    if (coordinate) {
        std::vector<std::vector<Index>> keep(top + 1);
        for (std::size_t k = 0; k <= top; ++k) {
            std::vector<char> hit(a.rank(k), 0);
            for (std::size_t j = 0; k > 0 && j < k; ++j) {
                const IntMatrix& s = a.codegeneracy(k, j);
                for (std::size_t r = 0; r < s.rows(); ++r) hit[s.row(r).cols[0]] = 1;
            }
            for (Index c = 0; c < a.rank(k); ++c)
                if (!hit[c]) keep[k].push_back(c);
            out.basis.push_back(IntMatrix::identity(a.rank(k)).select_cols(keep[k]));
            ranks.push_back(keep[k].size());
        }
        for (std::size_t k = 0; k < top; ++k) {
            IntMatrix cols = alt.differential(static_cast<int>(k)).select_cols(keep[k]);
            IntMatrix d = cols.select_rows(keep[k + 1]);
            if (!(out.basis[k + 1] * d == cols))
                throw MalformedInput("normalized coface: differential leaves the normalized subgroup in degree " +
                                     std::to_string(k));
            maps.push_back(std::move(d));
        }
    } else {
        for (std::size_t k = 0; k <= top; ++k) {
            IntMatrix stacked(0, a.rank(k));
            for (std::size_t j = 0; k > 0 && j < k; ++j) stacked = vstack(stacked, a.codegeneracy(k, j));
            out.basis.push_back(k == 0 ? IntMatrix::identity(a.rank(0)) : kernel_basis(stacked));
            ranks.push_back(out.basis.back().cols());
        }
        for (std::size_t k = 0; k < top; ++k) {
            auto x = solve_in_lattice(out.basis[k + 1], alt.differential(static_cast<int>(k)) * out.basis[k]);
            if (!x)
                throw MalformedInput("normalized coface: differential leaves the normalized subgroup in degree " +
                                     std::to_string(k));
            maps.push_back(std::move(*x));
        }
    }
    out.complex = CochainComplex(0, std::move(ranks), std::move(maps), a.coefficients());
    out.complex.verify();
    return out;
}

/// Cohomology of the quotient A^k / Σ_{i>=1} im d^i with the induced differential, computed
/// from presentations. Also checks that the coface images form a complement of N^k.
inline FgAbGroup conormalized_quotient_cohomology(const CosimplicialAbGroup& a, std::size_t k) {
    if (k + 1 > a.n_max()) throw BoundError("quotient cohomology needs degree k + 1");
    auto alt = alternating_coface(a);
    auto relations = [&](std::size_t n) {
        IntMatrix r(a.rank(n), 0);
        for (std::size_t i = 1; n > 0 && i <= n; ++i) r = hstack(r, a.coface(n - 1, i));
        return r;
    };
    IntMatrix rel_mid = relations(k), rel_out = relations(k + 1);
    IntMatrix in = k == 0 ? IntMatrix(a.rank(0), 0) : alt.differential(static_cast<int>(k) - 1);
    IntMatrix out = alt.differential(static_cast<int>(k));
    FgAbGroup result;
    const FgAbGroup& coeff = a.coefficients();
    for (std::size_t r = 0; r < coeff.free_rank(); ++r)
        result = direct_sum(result, presented_homology(in, out, rel_mid, rel_out));
    for (const auto& d : coeff.torsion())
        result = direct_sum(result, presented_homology(in, out, hstack(rel_mid, IntMatrix::scalar(a.rank(k), d)),
                                                       hstack(rel_out, IntMatrix::scalar(a.rank(k + 1), d))));
    return result;
}

/// W̄G for abelian G: W̄G_0 = 0 and W̄G_n = G_{n-1} ⊕ ... ⊕ G_0, with
///   d_0 (g_{n-1}, ..., g_0) = (g_{n-2}, ..., g_0),
///   d_i (g_{n-1}, ..., g_0) = (d_{i-1} g_{n-1}, ..., d_1 g_{n-i+1}, g_{n-i-1} + d_0 g_{n-i}, g_{n-i-2}, ..., g_0),
///   s_0 (g_{n-1}, ..., g_0) = (0, g_{n-1}, ..., g_0),
///   s_i (g_{n-1}, ..., g_0) = (s_{i-1} g_{n-1}, ..., s_0 g_{n-i}, 0, g_{n-i-1}, ..., g_0).
/// For i = n the merged entry would involve g_{-1}; the entry d_0 g_0 is dropped.
inline SimplicialAbGroup wbar(const SimplicialAbGroup& g, std::size_t n_max) {
    if (n_max > g.n_max() + 1) throw BoundError("wbar needs G up to degree n_max - 1");
    // Block for g_j inside W̄_n starts at offset(n, j); blocks run g_{n-1} first.
    auto offset = [&](std::size_t n, std::size_t j) {
        std::size_t o = 0;
        for (std::size_t t = n; t-- > j + 1;) o += g.rank(t);
        return o;
    };
    std::vector<std::size_t> ranks(n_max + 1, 0);
    for (std::size_t n = 1; n <= n_max; ++n) ranks[n] = ranks[n - 1] + g.rank(n - 1);
    SimplicialAbGroup w(ranks, g.coefficients());
    for (std::size_t n = 1; n <= n_max; ++n) {
        for (std::size_t i = 0; i <= n; ++i) {
            IntMatrix m(ranks[n - 1], ranks[n]);
            if (i == 0) {
                for (std::size_t j = 0; j + 1 < n; ++j) m.place(IntMatrix::identity(g.rank(j)), offset(n - 1, j), offset(n, j));
            } else {
                for (std::size_t t = 0; t + 1 < i; ++t) {  // d_{i-1-t} g_{n-1-t} lands in slot n-2-t
                    std::size_t j = n - 1 - t;
                    m.place(g.face(j, i - 1 - t), offset(n - 1, j - 1), offset(n, j));
                }
                if (i < n) {
                    std::size_t j = n - i - 1;  // merged slot
                    m.place(IntMatrix::identity(g.rank(j)), offset(n - 1, j), offset(n, j));
                    m.place(g.face(j + 1, 0), offset(n - 1, j), offset(n, j + 1));
                    for (std::size_t r = 0; r < j; ++r)
                        m.place(IntMatrix::identity(g.rank(r)), offset(n - 1, r), offset(n, r));
                }
            }
            w.set_face(n, i, std::move(m));
        }
    }
    for (std::size_t n = 0; n < n_max; ++n) {
        for (std::size_t i = 0; i <= n; ++i) {
            IntMatrix m(ranks[n + 1], ranks[n]);
            for (std::size_t t = 0; t < i; ++t) {  // s_{i-1-t} g_{n-1-t} lands in slot n-t
                std::size_t j = n - 1 - t;
                m.place(g.degeneracy(j, i - 1 - t), offset(n + 1, j + 1), offset(n, j));
            }
            for (std::size_t r = 0; r + i < n; ++r)  // g_r for r < n - i is copied
                m.place(IntMatrix::identity(g.rank(r)), offset(n + 1, r), offset(n, r));
            w.set_degeneracy(n, i, std::move(m));
        }
    }
    return w;
}

/// The identification ι_n : N_{n-1} G -> N_n W̄G, ι_n(g) = (-1)^n (g, -d_0 g, 0, ..., 0).
inline IntMatrix wbar_shift_embedding(const SimplicialAbGroup& g, const IntMatrix& normalized_basis, std::size_t n) {
    std::size_t rank_n = 0;
    for (std::size_t j = 0; j < n; ++j) rank_n += g.rank(j);
    IntMatrix e(rank_n, normalized_basis.cols());
    const Integer sign = (n % 2 == 0) ? 1 : -1;
    e.place(normalized_basis, 0, 0, sign);
    if (n >= 2) e.place(g.face(n - 1, 0) * normalized_basis, g.rank(n - 1), 0, -sign);
    return e;
}

/// Checks N(W̄G) = N(G)[1] through ι: it lands in the normalized chains, spans them, and
/// d_0 ∘ ι_n = ι_{n-1} ∘ ∂_{n-1} exactly.
inline bool check_wbar_shift(const SimplicialAbGroup& g, std::size_t n_max, std::string* why = nullptr) {
    auto fail = [&](const std::string& s) {
        if (why) *why = s;
        return false;
    };
    auto w = wbar(g, n_max);
    w.verify();
    auto nw = normalized_chain(w);
    auto ng = normalized_chain(g);
    if (nw.basis[0].cols() != 0) return fail("N_0 of W̄G is nonzero");
    for (std::size_t n = 1; n <= n_max; ++n) {
        IntMatrix iota = wbar_shift_embedding(g, ng.basis[n - 1], n);
        for (std::size_t i = 1; i <= n; ++i)
            if (!(w.face(n, i) * iota).is_zero()) return fail("ι lands outside N in degree " + std::to_string(n));
        if (!solve_in_lattice(iota, nw.basis[n]) || !solve_in_lattice(nw.basis[n], iota))
            return fail("ι does not span N in degree " + std::to_string(n));
        if (n >= 2) {
            IntMatrix lower = wbar_shift_embedding(g, ng.basis[n - 2], n - 1);
            if (!(w.face(n, 0) * iota == lower * ng.complex.boundary(static_cast<int>(n) - 1)))
                return fail("d_0 ∘ ι differs from ι ∘ ∂ in degree " + std::to_string(n));
        }
    }
    return true;
}

/// The counit Γ(N G) -> G: on the summand of σ : [n] ↠ [m] it is σ^* restricted to N_m G.
inline std::vector<IntMatrix> dold_kan_counit(const SimplicialAbGroup& g, const NormalizedChain& n) {
    std::vector<IntMatrix> out;
    for (std::size_t d = 0; d <= g.n_max(); ++d) {
        std::size_t total = 0;
        auto surj = detail::surjections_from(d);
        for (const auto& s : surj) total += n.complex.rank(static_cast<int>(s.back()));
        IntMatrix m(g.rank(d), total);
        std::size_t col = 0;
        for (const auto& s : surj) {
            const std::size_t md = s.back();
            if (n.complex.rank(static_cast<int>(md)) == 0) continue;
            m.place(simplicial_operator(g, s, md) * n.basis[md], 0, col);
            col += n.complex.rank(static_cast<int>(md));
        }
        out.push_back(std::move(m));
    }
    return out;
}

/// Checks that maps f_n : X_n -> Y_n form an isomorphism of simplicial abelian groups.
inline bool is_simplicial_isomorphism(const SimplicialAbGroup& x, const SimplicialAbGroup& y,
                                      const std::vector<IntMatrix>& f, std::string* why = nullptr) {
    auto fail = [&](const std::string& s) {
        if (why) *why = s;
        return false;
    };
    if (x.n_max() != y.n_max() || f.size() != x.n_max() + 1) return fail("truncation degrees differ");
    for (std::size_t n = 0; n <= x.n_max(); ++n) {
        if (f[n].rows() != y.rank(n) || f[n].cols() != x.rank(n)) return fail("shape mismatch in degree " + std::to_string(n));
        if (abs_value(determinant(f[n])) != 1) return fail("not invertible in degree " + std::to_string(n));
        for (std::size_t i = 0; n > 0 && i <= n; ++i)
            if (!(y.face(n, i) * f[n] == f[n - 1] * x.face(n, i))) return fail("face d_" + std::to_string(i) + " not preserved");
        for (std::size_t i = 0; n < x.n_max() && i <= n; ++i)
            if (!(y.degeneracy(n, i) * f[n] == f[n + 1] * x.degeneracy(n, i)))
                return fail("degeneracy s_" + std::to_string(i) + " not preserved");
    }
    return true;
}

struct WbarIteration {
    SimplicialAbGroup object;          // W̄^k of the constant group
    SimplicialAbGroup model;           // Γ(A[k])
    std::vector<IntMatrix> iso;        // model -> object, checked
};

/// W̄^k cA with an explicit isomorphism from Γ(A[k]) (the Dold–Kan counit), verified.
inline WbarIteration wbar_iter(const FgAbGroup& a, std::size_t k, std::size_t n_max) {
    if (n_max < k + 2) throw BoundError("wbar_iter needs n_max >= k + 2");
    SimplicialAbGroup g = SimplicialAbGroup::constant(a, n_max);
    for (std::size_t t = 0; t < k; ++t) g = wbar(g, n_max);
    g.verify();
    auto n = normalized_chain(g);
    for (std::size_t d = 0; d <= n_max; ++d)
        if (n.complex.rank(static_cast<int>(d)) != (d == k ? 1u : 0u))
            throw MalformedInput("W̄^k cA has unexpected normalized ranks");
    auto model = em_object(a, k, n_max);
    auto counit = dold_kan_counit(g, n);
    std::string why;
    if (!is_simplicial_isomorphism(model, g, counit, &why)) throw MalformedInput("counit is not an isomorphism: " + why);
    return {std::move(g), std::move(model), std::move(counit)};
}

}  // namespace diffcech
