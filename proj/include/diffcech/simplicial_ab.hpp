/**
 * Degreewise finitely generated simplicial and cosimplicial abelian groups.
 *
 * Every object is stored as a free skeleton (Z^{r_k} in degree k with
 * integer structure matrices) tensored with one coefficient group A. All
 * constructions in this library are of that form, and kernel, image and
 * homology computations on the skeleton commute with the final ⊗ A where
 * they are natural direct summands.
 */
#pragma once

#include <string>
#include <vector>

#include "complex.hpp"
#include "simplicial_set.hpp"

namespace diffcech {

namespace detail {

inline std::string op_name(const char* op, std::size_t i) { return std::string(op) + "_" + std::to_string(i); }

inline void require_equal(const IntMatrix& a, const IntMatrix& b, const std::string& identity, std::size_t degree) {
    if (!(a == b))
        throw MalformedInput("identity " + identity + " fails in degree " + std::to_string(degree));
}

}  // namespace detail

class SimplicialAbGroup {
public:
    SimplicialAbGroup() = default;

    SimplicialAbGroup(std::vector<std::size_t> ranks, FgAbGroup coefficients = FgAbGroup::integers())
        : ranks_(std::move(ranks)), coeff_(std::move(coefficients)) {
        if (ranks_.empty()) throw MalformedInput("simplicial group needs degree 0");
        const std::size_t top = n_max();
        faces_.resize(top + 1);
        degens_.resize(top + 1);
        for (std::size_t k = 0; k <= top; ++k) {
            for (std::size_t i = 0; k > 0 && i <= k; ++i) faces_[k].emplace_back(ranks_[k - 1], ranks_[k]);
            for (std::size_t i = 0; k < top && i <= k; ++i) degens_[k].emplace_back(ranks_[k + 1], ranks_[k]);
        }
    }

    /// The constant simplicial group on A: skeleton Z in every degree with identity maps.
    static SimplicialAbGroup constant(const FgAbGroup& a, std::size_t n_max) {
        SimplicialAbGroup g(std::vector<std::size_t>(n_max + 1, 1), a);
        for (std::size_t k = 0; k <= n_max; ++k) {
            for (std::size_t i = 0; k > 0 && i <= k; ++i) g.faces_[k][i] = IntMatrix::identity(1);
            for (std::size_t i = 0; k < n_max && i <= k; ++i) g.degens_[k][i] = IntMatrix::identity(1);
        }
        return g;
    }

    /// Z[X] ⊗ A: the free simplicial abelian group on a simplicial set.
    static SimplicialAbGroup free_on(const TruncatedSimplicialSet& x, FgAbGroup a = FgAbGroup::integers()) {
        std::vector<std::size_t> ranks;
        for (std::size_t k = 0; k <= x.n_max(); ++k) ranks.push_back(x.count(k));
        SimplicialAbGroup g(ranks, std::move(a));
        for (std::size_t k = 0; k <= x.n_max(); ++k) {
            for (std::size_t i = 0; k > 0 && i <= k; ++i)
                g.faces_[k][i] = IntMatrix::selection(x.face_map(k, i), ranks[k - 1]).transpose();
            for (std::size_t i = 0; k < x.n_max() && i <= k; ++i)
                g.degens_[k][i] = IntMatrix::selection(x.degeneracy_map(k, i), ranks[k + 1]).transpose();
        }
        return g;
    }

    std::size_t n_max() const { return ranks_.size() - 1; }
    std::size_t rank(std::size_t k) const { return ranks_.at(k); }
    const std::vector<std::size_t>& ranks() const { return ranks_; }
    const FgAbGroup& coefficients() const { return coeff_; }

    /// d_i : G_k -> G_{k-1} as a rank(k-1) x rank(k) matrix.
    const IntMatrix& face(std::size_t k, std::size_t i) const { return faces_.at(k).at(i); }
    /// s_i : G_k -> G_{k+1}.
    const IntMatrix& degeneracy(std::size_t k, std::size_t i) const { return degens_.at(k).at(i); }

    void set_face(std::size_t k, std::size_t i, IntMatrix m) {
        check_shape(m, ranks_.at(k - 1), ranks_.at(k), "face");
        faces_.at(k).at(i) = std::move(m);
    }

    void set_degeneracy(std::size_t k, std::size_t i, IntMatrix m) {
        check_shape(m, ranks_.at(k + 1), ranks_.at(k), "degeneracy");
        degens_.at(k).at(i) = std::move(m);
    }

    /// Simplicial identities as matrix equations; throws MalformedInput naming the first failure.
    void verify() const {
        using detail::op_name;
        using detail::require_equal;
        const std::size_t top = n_max();
        for (std::size_t k = 2; k <= top; ++k)
            for (std::size_t j = 1; j <= k; ++j)
                for (std::size_t i = 0; i < j; ++i)
                    require_equal(face(k - 1, i) * face(k, j), face(k - 1, j - 1) * face(k, i),
                                  op_name("d", i) + op_name("d", j) + " = " + op_name("d", j - 1) + op_name("d", i), k);
        for (std::size_t k = 0; k + 2 <= top; ++k)
            for (std::size_t j = 0; j <= k; ++j)
                for (std::size_t i = 0; i <= j; ++i)
                    require_equal(degeneracy(k + 1, i) * degeneracy(k, j), degeneracy(k + 1, j + 1) * degeneracy(k, i),
                                  op_name("s", i) + op_name("s", j) + " = " + op_name("s", j + 1) + op_name("s", i), k);
        for (std::size_t k = 0; k + 1 <= top; ++k)
            for (std::size_t j = 0; j <= k; ++j)
                for (std::size_t i = 0; i <= k + 1; ++i) {
                    IntMatrix lhs = face(k + 1, i) * degeneracy(k, j);
                    std::string name = op_name("d", i) + op_name("s", j);
                    if (i < j)
                        require_equal(lhs, degeneracy(k - 1, j - 1) * face(k, i), name, k);
                    else if (i == j || i == j + 1)
                        require_equal(lhs, IntMatrix::identity(rank(k)), name, k);
                    else
                        require_equal(lhs, degeneracy(k - 1, j) * face(k, i - 1), name, k);
                }
    }

    friend bool operator==(const SimplicialAbGroup&, const SimplicialAbGroup&) = default;

private:
    static void check_shape(const IntMatrix& m, std::size_t r, std::size_t c, const char* what) {
        if (m.rows() != r || m.cols() != c) throw MalformedInput(std::string(what) + " matrix has the wrong shape");
    }

    std::vector<std::size_t> ranks_;
    FgAbGroup coeff_ = FgAbGroup::integers();
    std::vector<std::vector<IntMatrix>> faces_;
    std::vector<std::vector<IntMatrix>> degens_;
};

class CosimplicialAbGroup {
public:
    CosimplicialAbGroup() = default;

    CosimplicialAbGroup(std::vector<std::size_t> ranks, FgAbGroup coefficients = FgAbGroup::integers())
        : ranks_(std::move(ranks)), coeff_(std::move(coefficients)) {
        if (ranks_.empty()) throw MalformedInput("cosimplicial group needs degree 0");
        const std::size_t top = n_max();
        cofaces_.resize(top + 1);
        codegens_.resize(top + 1);
        for (std::size_t k = 0; k <= top; ++k) {
            for (std::size_t i = 0; k < top && i <= k + 1; ++i) cofaces_[k].emplace_back(ranks_[k + 1], ranks_[k]);
            for (std::size_t i = 0; k > 0 && i < k; ++i) codegens_[k].emplace_back(ranks_[k - 1], ranks_[k]);
        }
    }

    static CosimplicialAbGroup constant(const FgAbGroup& a, std::size_t n_max) {
        CosimplicialAbGroup g(std::vector<std::size_t>(n_max + 1, 1), a);
        for (std::size_t k = 0; k <= n_max; ++k) {
            for (std::size_t i = 0; k < n_max && i <= k + 1; ++i) g.cofaces_[k][i] = IntMatrix::identity(1);
            for (std::size_t i = 0; k > 0 && i < k; ++i) g.codegens_[k][i] = IntMatrix::identity(1);
        }
        return g;
    }

    std::size_t n_max() const { return ranks_.size() - 1; }
    std::size_t rank(std::size_t k) const { return ranks_.at(k); }
    const std::vector<std::size_t>& ranks() const { return ranks_; }
    const FgAbGroup& coefficients() const { return coeff_; }

    /// d^i : A^k -> A^{k+1}, 0 <= i <= k+1.
    const IntMatrix& coface(std::size_t k, std::size_t i) const { return cofaces_.at(k).at(i); }
    /// s^i : A^k -> A^{k-1}, 0 <= i < k.
    const IntMatrix& codegeneracy(std::size_t k, std::size_t i) const { return codegens_.at(k).at(i); }

    void set_coface(std::size_t k, std::size_t i, IntMatrix m) { cofaces_.at(k).at(i) = std::move(m); }
    void set_codegeneracy(std::size_t k, std::size_t i, IntMatrix m) { codegens_.at(k).at(i) = std::move(m); }

    /// Cosimplicial identities as matrix equations; throws MalformedInput naming the first failure.
    void verify() const {
        using detail::op_name;
        using detail::require_equal;
        const std::size_t top = n_max();
        for (std::size_t k = 0; k <= top; ++k) {
            for (std::size_t i = 0; k < top && i <= k + 1; ++i)
                if (coface(k, i).rows() != rank(k + 1) || coface(k, i).cols() != rank(k))
                    throw MalformedInput("coface matrix has the wrong shape");
            for (std::size_t i = 0; k > 0 && i < k; ++i)
                if (codegeneracy(k, i).rows() != rank(k - 1) || codegeneracy(k, i).cols() != rank(k))
                    throw MalformedInput("codegeneracy matrix has the wrong shape");
        }
        // d^j d^i = d^i d^{j-1} for i < j, from degree k to k+2.
        for (std::size_t k = 0; k + 2 <= top; ++k)
            for (std::size_t j = 1; j <= k + 2; ++j)
                for (std::size_t i = 0; i < j; ++i)
                    require_equal(coface(k + 1, j) * coface(k, i), coface(k + 1, i) * coface(k, j - 1),
                                  op_name("d^", j) + op_name("d^", i) + " = " + op_name("d^", i) + op_name("d^", j - 1), k);
        // s^j s^i = s^i s^{j+1} for i <= j, from degree k to k-2.
        for (std::size_t k = 2; k <= top; ++k)
            for (std::size_t j = 0; j + 2 <= k; ++j)
                for (std::size_t i = 0; i <= j; ++i)
                    require_equal(codegeneracy(k - 1, j) * codegeneracy(k, i), codegeneracy(k - 1, i) * codegeneracy(k, j + 1),
                                  op_name("s^", j) + op_name("s^", i) + " = " + op_name("s^", i) + op_name("s^", j + 1), k);
        // s^j d^i on degree k (d^i : k -> k+1, s^j : k+1 -> k).
        for (std::size_t k = 0; k + 1 <= top; ++k)
            for (std::size_t j = 0; j <= k; ++j)
                for (std::size_t i = 0; i <= k + 1; ++i) {
                    IntMatrix lhs = codegeneracy(k + 1, j) * coface(k, i);
                    std::string name = op_name("s^", j) + op_name("d^", i);
                    if (i < j)
                        require_equal(lhs, coface(k - 1, i) * codegeneracy(k, j - 1), name, k);
                    else if (i == j || i == j + 1)
                        require_equal(lhs, IntMatrix::identity(rank(k)), name, k);
                    else
                        require_equal(lhs, coface(k - 1, i - 1) * codegeneracy(k, j), name, k);
                }
    }

    friend bool operator==(const CosimplicialAbGroup&, const CosimplicialAbGroup&) = default;

private:
    std::vector<std::size_t> ranks_;
    FgAbGroup coeff_ = FgAbGroup::integers();
    std::vector<std::vector<IntMatrix>> cofaces_;
    std::vector<std::vector<IntMatrix>> codegens_;
};

/// Component-constant A-valued functions; cofaces and codegeneracies are pullbacks.
inline CosimplicialAbGroup functions_cosimplicial(const TruncatedSimplicialSet& x, const FgAbGroup& a) {
    if (!x.has_components()) throw ModelError("functions_cosimplicial needs component data in every degree");
    const std::size_t top = x.n_max();
    std::vector<std::size_t> ranks;
    for (std::size_t k = 0; k <= top; ++k) ranks.push_back(x.component_count(k));
    CosimplicialAbGroup g(ranks, a);
    for (std::size_t k = 0; k < top; ++k)
        for (std::size_t i = 0; i <= k + 1; ++i) {
            auto f = x.component_face(k + 1, i);
            if (!f) throw ModelError("face d_" + std::to_string(i) + " in degree " + std::to_string(k + 1) +
                                     " does not respect components");
            g.set_coface(k, i, IntMatrix::selection(*f, ranks[k]));
        }
    for (std::size_t k = 1; k <= top; ++k)
        for (std::size_t j = 0; j < k; ++j) {
            auto s = x.component_degeneracy(k - 1, j);
            if (!s) throw ModelError("degeneracy s_" + std::to_string(j) + " in degree " + std::to_string(k - 1) +
                                     " does not respect components");
            g.set_codegeneracy(k, j, IntMatrix::selection(*s, ranks[k]));
        }
    return g;
}

/// Moore complex: N_n = ∩_{i=1..n} ker d_i with boundary d_0, on the free skeleton.
/// basis[n] holds a lattice basis of N_n as columns of a rank(n) x dim matrix.
struct MooreComplex {
    ChainComplex complex;
    std::vector<IntMatrix> basis;
};

inline MooreComplex moore_complex(const SimplicialAbGroup& g) {
    const std::size_t top = g.n_max();
    std::vector<IntMatrix> basis;
    for (std::size_t n = 0; n <= top; ++n) {
        if (n == 0) {
            basis.push_back(IntMatrix::identity(g.rank(0)));
            continue;
        }
        IntMatrix stacked(0, g.rank(n));
        for (std::size_t i = 1; i <= n; ++i) stacked = vstack(stacked, g.face(n, i));
        basis.push_back(kernel_basis(stacked));
    }
    std::vector<std::size_t> ranks;
    std::vector<IntMatrix> maps;
    for (std::size_t n = 0; n <= top; ++n) ranks.push_back(basis[n].cols());
    for (std::size_t n = 1; n <= top; ++n) {
        auto x = solve_in_lattice(basis[n - 1], g.face(n, 0) * basis[n]);
        if (!x) throw MalformedInput("Moore complex: d_0 does not preserve normalized chains");
        maps.push_back(std::move(*x));
    }
    ChainComplex c(0, std::move(ranks), std::move(maps), g.coefficients());
    c.verify();
    return {std::move(c), std::move(basis)};
}

struct HomotopyGroups {
    std::vector<FgAbGroup> groups;  // π_0 .. π_{n_max - 1}
    std::size_t reliable_below = 0; // groups[k] with k >= reliable_below sit next to the truncation bound
};

/// Homotopy groups as homology of the Moore complex.
inline HomotopyGroups moore_homotopy(const SimplicialAbGroup& g) {
    g.verify();
    auto m = moore_complex(g);
    HomotopyGroups h;
    for (std::size_t k = 0; k < g.n_max(); ++k) h.groups.push_back(homology(m.complex, static_cast<int>(k)));
    h.reliable_below = g.n_max() >= 1 ? g.n_max() - 1 : 0;
    return h;
}

}  // namespace diffcech
