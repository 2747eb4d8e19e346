/**
 * Bounded (co)chain complexes of free Z-modules, optionally tensored with a
 * finitely generated coefficient group, and their (co)homology.
 *
 * A coefficient group A = Z^r ⊕ Z/d_1 ⊕ ... is never materialized: the
 * complex stores its free skeleton C and (co)homology of C ⊗ A is the sum
 * over cyclic summands of A. For a summand Z/d the module Z^m / dZ^m is
 * presented by appending the relation block d·I to the differential, which
 * turns C ⊗ Z/d into the mapping cone of d on C, again a complex of free
 * modules.
 */
#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "fg_abelian.hpp"
#include "smith.hpp"

namespace diffcech {

/// Homology at the middle of  Z^p --in--> Z^m --out--> Z^q  where the middle
/// and target modules are quotients by the column spans of rel_mid / rel_out.
inline FgAbGroup presented_homology(const IntMatrix& in, const IntMatrix& out, const IntMatrix& rel_mid,
                                    const IntMatrix& rel_out) {
    const std::size_t m = in.rows();
    if (out.cols() != m || rel_mid.rows() != m || rel_out.rows() != out.rows())
        throw MalformedInput("presented_homology: shape mismatch");
    // Cycles: x with out·x in span(rel_out).
    IntMatrix ker = kernel_basis(hstack(out, rel_out));
    IntMatrix cycles_gen = ker.block(0, m, 0, ker.cols());
    IntMatrix cycles = column_lattice_basis(cycles_gen);
    IntMatrix bounds = hstack(in, rel_mid);
    auto coords = solve_in_lattice(cycles, bounds);
    if (!coords) throw MalformedInput("presented_homology: boundaries are not cycles (d∘d ≠ 0)");
    std::vector<Integer> orders;
    auto inv = smith_invariants(*coords);
    for (const auto& d : inv) orders.push_back(d);
    for (std::size_t i = inv.size(); i < cycles.cols(); ++i) orders.emplace_back(0);
    return FgAbGroup::from_cyclic_orders(orders);
}

/// Homology of Z^p/d -> Z^m/d -> Z^q/d, read off the mapping cone of multiplication by d:
///   C_m ⊕ C_p --[[-out, 0], [d, in]]--> C_q ⊕ C_m --[d | out]--> C_q
/// (the complex truncated below the target, which leaves the middle homology unchanged).
/// Only invariant factors are needed, so the sparse reduction applies.
inline FgAbGroup cone_homology(const IntMatrix& in, const IntMatrix& out, const Integer& d) {
    const std::size_t p = in.cols(), m = in.rows(), q = out.rows();
    IntMatrix upper(q + m, m + p);
    upper.place(out, 0, 0, -1);
    upper.place(IntMatrix::scalar(m, d), q, 0);
    upper.place(in, q, m);
    IntMatrix lower(q, q + m);
    lower.place(IntMatrix::scalar(q, d), 0, 0);
    lower.place(out, 0, q);
    auto inv = smith_invariants(upper);
    std::size_t rank_lower = matrix_rank(lower);
    std::vector<Integer> orders;
    for (const auto& v : inv)
        if (v > 1) orders.push_back(v);
    for (std::size_t i = 0; i < q + m - rank_lower - inv.size(); ++i) orders.emplace_back(0);
    return FgAbGroup::from_cyclic_orders(orders);
}

/// Homology of Z^p -> Z^m -> Z^q tensored with the coefficient group.
inline FgAbGroup middle_homology(const IntMatrix& in, const IntMatrix& out, const FgAbGroup& coefficients) {
    const std::size_t m = in.rows();
    if (out.cols() != m) throw MalformedInput("middle_homology: shape mismatch");
    FgAbGroup result;
    if (coefficients.free_rank() > 0) {
        auto inv_in = smith_invariants(in);
        std::size_t rank_out = matrix_rank(out);
        std::vector<Integer> orders;
        for (const auto& d : inv_in)
            if (d > 1) orders.push_back(d);
        for (std::size_t i = 0; i < m - rank_out - inv_in.size(); ++i) orders.emplace_back(0);
        FgAbGroup h = FgAbGroup::from_cyclic_orders(orders);
        for (std::size_t r = 0; r < coefficients.free_rank(); ++r) result = direct_sum(result, h);
    }
    for (const auto& d : coefficients.torsion()) result = direct_sum(result, cone_homology(in, out, d));
    return result;
}

namespace detail {

inline void check_product_zero(const IntMatrix& a, const IntMatrix& b, const std::string& where) {
    if (a.cols() != b.rows()) throw MalformedInput(where + ": differential shapes do not match adjacent ranks");
    if (!(a * b).is_zero()) throw MalformedInput(where + ": composite of consecutive differentials is nonzero");
}

}  // namespace detail

/// Chain complex: boundary(n) maps degree n to degree n-1.
class ChainComplex {
public:
    ChainComplex() = default;

    /// boundaries[j] maps degree lo+j+1 to lo+j.
    ChainComplex(int lo, std::vector<std::size_t> ranks, std::vector<IntMatrix> boundaries,
                 FgAbGroup coefficients = FgAbGroup::integers())
        : lo_(lo), ranks_(std::move(ranks)), maps_(std::move(boundaries)), coeff_(std::move(coefficients)) {
        if (!ranks_.empty() && maps_.size() + 1 != ranks_.size())
            throw MalformedInput("chain complex: need one boundary between each pair of adjacent degrees");
        for (std::size_t j = 0; j < maps_.size(); ++j)
            if (maps_[j].rows() != ranks_[j] || maps_[j].cols() != ranks_[j + 1])
                throw MalformedInput("chain complex: boundary " + std::to_string(lo_ + static_cast<int>(j) + 1) +
                                     " has the wrong shape");
    }

    /// Z^rank (tensored with the coefficients) concentrated in one degree.
    static ChainComplex concentrated(int degree, std::size_t rank, FgAbGroup coefficients = FgAbGroup::integers()) {
        return ChainComplex(degree, {rank}, {}, std::move(coefficients));
    }

    int lo() const { return lo_; }
    int hi() const { return lo_ + static_cast<int>(ranks_.size()) - 1; }
    bool empty() const { return ranks_.empty(); }
    const FgAbGroup& coefficients() const { return coeff_; }

    std::size_t rank(int n) const {
        if (ranks_.empty() || n < lo_ || n > hi()) return 0;
        return ranks_[static_cast<std::size_t>(n - lo_)];
    }

    IntMatrix boundary(int n) const {
        if (ranks_.empty() || n <= lo_ || n > hi()) return IntMatrix(rank(n - 1), rank(n));
        return maps_[static_cast<std::size_t>(n - lo_ - 1)];
    }

    void verify() const {
        for (int n = lo_ + 1; n < hi(); ++n)
            detail::check_product_zero(boundary(n), boundary(n + 1), "chain complex degree " + std::to_string(n));
    }

    ChainComplex with_coefficients(FgAbGroup a) const {
        ChainComplex c = *this;
        c.coeff_ = std::move(a);
        return c;
    }

    friend bool operator==(const ChainComplex&, const ChainComplex&) = default;

private:
    int lo_ = 0;
    std::vector<std::size_t> ranks_;
    std::vector<IntMatrix> maps_;
    FgAbGroup coeff_ = FgAbGroup::integers();
};

/// Cochain complex: differential(n) maps degree n to degree n+1.
class CochainComplex {
public:
    CochainComplex() = default;

    /// differentials[j] maps degree lo+j to lo+j+1.
    CochainComplex(int lo, std::vector<std::size_t> ranks, std::vector<IntMatrix> differentials,
                   FgAbGroup coefficients = FgAbGroup::integers())
        : lo_(lo), ranks_(std::move(ranks)), maps_(std::move(differentials)), coeff_(std::move(coefficients)) {
        if (!ranks_.empty() && maps_.size() + 1 != ranks_.size())
            throw MalformedInput("cochain complex: need one differential between each pair of adjacent degrees");
        for (std::size_t j = 0; j < maps_.size(); ++j)
            if (maps_[j].rows() != ranks_[j + 1] || maps_[j].cols() != ranks_[j])
                throw MalformedInput("cochain complex: differential " + std::to_string(lo_ + static_cast<int>(j)) +
                                     " has the wrong shape");
    }

    int lo() const { return lo_; }
    int hi() const { return lo_ + static_cast<int>(ranks_.size()) - 1; }
    bool empty() const { return ranks_.empty(); }
    const FgAbGroup& coefficients() const { return coeff_; }

    std::size_t rank(int n) const {
        if (ranks_.empty() || n < lo_ || n > hi()) return 0;
        return ranks_[static_cast<std::size_t>(n - lo_)];
    }

    IntMatrix differential(int n) const {
        if (ranks_.empty() || n < lo_ || n >= hi()) return IntMatrix(rank(n + 1), rank(n));
        return maps_[static_cast<std::size_t>(n - lo_)];
    }

    void verify() const {
        for (int n = lo_; n + 1 < hi(); ++n)
            detail::check_product_zero(differential(n + 1), differential(n),
                                       "cochain complex degree " + std::to_string(n));
    }

    CochainComplex with_coefficients(FgAbGroup a) const {
        CochainComplex c = *this;
        c.coeff_ = std::move(a);
        return c;
    }

    friend bool operator==(const CochainComplex&, const CochainComplex&) = default;

private:
    int lo_ = 0;
    std::vector<std::size_t> ranks_;
    std::vector<IntMatrix> maps_;
    FgAbGroup coeff_ = FgAbGroup::integers();
};

/// H_n = ker ∂_n / im ∂_{n+1}; degrees outside the bounds are zero modules.
inline FgAbGroup homology(const ChainComplex& c, int n) {
    return middle_homology(c.boundary(n + 1), c.boundary(n), c.coefficients());
}

/// H^n = ker d^n / im d^{n-1}.
inline FgAbGroup cohomology(const CochainComplex& c, int n) {
    return middle_homology(c.differential(n - 1), c.differential(n), c.coefficients());
}

/// (C[k])_n = C_{n-k}, differentials unchanged.
inline ChainComplex shift(const ChainComplex& c, int k) {
    std::vector<std::size_t> ranks;
    std::vector<IntMatrix> maps;
    for (int n = c.lo(); n <= c.hi(); ++n) ranks.push_back(c.rank(n));
    for (int n = c.lo() + 1; n <= c.hi(); ++n) maps.push_back(c.boundary(n));
    return ChainComplex(c.lo() + k, std::move(ranks), std::move(maps), c.coefficients());
}

/// Bounded double complex with commuting squares:
/// horizontal (p,q) -> (p+1,q), vertical (p,q) -> (p,q-1).
class DoubleComplex {
public:
    DoubleComplex(int p_lo, int p_hi, int q_lo, int q_hi, FgAbGroup coefficients = FgAbGroup::integers())
        : p_lo_(p_lo), p_hi_(p_hi), q_lo_(q_lo), q_hi_(q_hi), coeff_(std::move(coefficients)) {
        if (p_hi < p_lo || q_hi < q_lo) throw MalformedInput("double complex: empty bounds");
        ranks_.assign(static_cast<std::size_t>((p_hi - p_lo + 1) * (q_hi - q_lo + 1)), 0);
    }

    int p_lo() const { return p_lo_; }
    int p_hi() const { return p_hi_; }
    int q_lo() const { return q_lo_; }
    int q_hi() const { return q_hi_; }
    const FgAbGroup& coefficients() const { return coeff_; }

    bool in_range(int p, int q) const { return p >= p_lo_ && p <= p_hi_ && q >= q_lo_ && q <= q_hi_; }

    std::size_t rank(int p, int q) const {
        return in_range(p, q) ? ranks_[static_cast<std::size_t>((p - p_lo_) * (q_hi_ - q_lo_ + 1) + (q - q_lo_))] : 0;
    }

    void set_rank(int p, int q, std::size_t r) {
        if (!in_range(p, q)) throw MalformedInput("double complex: rank outside bounds");
        ranks_[static_cast<std::size_t>((p - p_lo_) * (q_hi_ - q_lo_ + 1) + (q - q_lo_))] = r;
    }

    void set_horizontal(int p, int q, IntMatrix m) { horizontal_[{p, q}] = std::move(m); }
    void set_vertical(int p, int q, IntMatrix m) { vertical_[{p, q}] = std::move(m); }

    IntMatrix horizontal(int p, int q) const {
        auto it = horizontal_.find({p, q});
        if (it != horizontal_.end()) return it->second;
        return IntMatrix(rank(p + 1, q), rank(p, q));
    }

    IntMatrix vertical(int p, int q) const {
        auto it = vertical_.find({p, q});
        if (it != vertical_.end()) return it->second;
        return IntMatrix(rank(p, q - 1), rank(p, q));
    }

    void verify() const {
        for (int p = p_lo_; p <= p_hi_; ++p)
            for (int q = q_lo_; q <= q_hi_; ++q) {
                const std::string at = " at (" + std::to_string(p) + "," + std::to_string(q) + ")";
                IntMatrix h = horizontal(p, q), v = vertical(p, q);
                if (h.rows() != rank(p + 1, q) || h.cols() != rank(p, q) || v.rows() != rank(p, q - 1) ||
                    v.cols() != rank(p, q))
                    throw MalformedInput("double complex: shape mismatch" + at);
                if (!(horizontal(p + 1, q) * h).is_zero())
                    throw MalformedInput("double complex: d_h∘d_h ≠ 0" + at);
                if (!(vertical(p, q - 1) * v).is_zero())
                    throw MalformedInput("double complex: d_v∘d_v ≠ 0" + at);
                if (!(horizontal(p, q - 1) * v == vertical(p + 1, q) * h))
                    throw MalformedInput("double complex: square does not commute" + at);
            }
    }

private:
    int p_lo_, p_hi_, q_lo_, q_hi_;
    FgAbGroup coeff_;
    std::vector<std::size_t> ranks_;
    std::map<std::pair<int, int>, IntMatrix> horizontal_, vertical_;
};

/// Tot^n = ⊕_{p-q=n} D^{p,q}, differential d_h + (-1)^p d_v on the (p,q) block.
inline CochainComplex total_cochain_complex(const DoubleComplex& d) {
    const int lo = d.p_lo() - d.q_hi();
    const int hi = d.p_hi() - d.q_lo();
    // Block offsets, blocks ordered by increasing p.
    std::map<std::pair<int, int>, std::size_t> offset;
    std::vector<std::size_t> ranks;
    for (int n = lo; n <= hi; ++n) {
        std::size_t total = 0;
        for (int p = d.p_lo(); p <= d.p_hi(); ++p) {
            int q = p - n;
            if (!d.in_range(p, q)) continue;
            offset[{p, q}] = total;
            total += d.rank(p, q);
        }
        ranks.push_back(total);
    }
    std::vector<IntMatrix> maps;
    for (int n = lo; n < hi; ++n) {
        IntMatrix m(ranks[static_cast<std::size_t>(n + 1 - lo)], ranks[static_cast<std::size_t>(n - lo)]);
        for (int p = d.p_lo(); p <= d.p_hi(); ++p) {
            int q = p - n;
            if (!d.in_range(p, q) || d.rank(p, q) == 0) continue;
            std::size_t col = offset.at({p, q});
            if (d.in_range(p + 1, q)) m.place(d.horizontal(p, q), offset.at({p + 1, q}), col);
            if (d.in_range(p, q - 1)) m.place(d.vertical(p, q), offset.at({p, q - 1}), col, (p % 2 == 0) ? 1 : -1);
        }
        maps.push_back(std::move(m));
    }
    CochainComplex tot(lo, std::move(ranks), std::move(maps), d.coefficients());
    try {
        tot.verify();
    } catch (const MalformedInput& e) {
        throw MalformedInput(std::string("malformed double complex: sign-twisted total complex fails: ") + e.what());
    }
    return tot;
}

}  // namespace diffcech
