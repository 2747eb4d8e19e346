/**
 * Smith normal form over the integers and the lattice utilities built on it
 * (ranks, kernels, coordinates in a sublattice).
 *
 * Reduction is the textbook row/column gcd scheme with the pivot chosen as
 * an entry of minimal absolute value. `smith_invariants` first clears
 * pivots directly on the sparse rows (units, or entries dividing their whole
 * row and column) and only densifies what is left, which keeps the large
 * coboundary matrices and their d·I relation blocks tractable.
 */
#pragma once

#include <optional>
#include <vector>

#include "matrix.hpp"

namespace diffcech {

struct SmithForm {
    IntMatrix U;  ///< unimodular, rows x rows
    IntMatrix D;  ///< diagonal, d_1 | d_2 | ...
    IntMatrix V;  ///< unimodular, cols x cols
    std::vector<Integer> invariants;  ///< the nonzero diagonal entries, in order

    std::size_t rank() const { return invariants.size(); }
};

/// Diagonal with a nonnegative divisibility chain d_1 | d_2 | ..., zeros last.
inline bool is_smith_diagonal(const IntMatrix& d) {
    for (std::size_t i = 0; i < d.rows(); ++i)
        for (std::size_t j = 0; j < d.cols(); ++j)
            if (i != j && d.at(i, j) != 0) return false;
    std::size_t n = std::min(d.rows(), d.cols());
    for (std::size_t t = 0; t < n; ++t)
        if (d.at(t, t) < 0) return false;
    for (std::size_t t = 0; t + 1 < n; ++t) {
        Integer a = d.at(t, t), b = d.at(t + 1, t + 1);
        if (a == 0 && b != 0) return false;
        if (a != 0 && b % a != 0) return false;
    }
    return true;
}

namespace detail {

class DenseSmith {
public:
    DenseSmith(const IntMatrix& m, bool track) : m_(m.rows()), n_(m.cols()), track_(track) {
        a_.assign(m_ * n_, Integer(0));
        for (std::size_t i = 0; i < m_; ++i) {
            const auto& r = m.row(i);
            for (std::size_t k = 0; k < r.size(); ++k) a_[i * n_ + r.cols[k]] = r.vals[k];
        }
        if (track_) {
            u_.assign(m_ * m_, Integer(0));
            v_.assign(n_ * n_, Integer(0));
            for (std::size_t i = 0; i < m_; ++i) u_[i * m_ + i] = 1;
            for (std::size_t j = 0; j < n_; ++j) v_[j * n_ + j] = 1;
        }
    }

    DenseSmith(std::vector<Integer> dense, std::size_t m, std::size_t n)
        : m_(m), n_(n), track_(false), a_(std::move(dense)) {}

    void reduce() {
        std::size_t lim = std::min(m_, n_);
        for (std::size_t t = 0; t < lim; ++t) {
            std::size_t pi = 0, pj = 0;
            if (!min_entry(t, pi, pj)) break;
            swap_rows(t, pi);
            swap_cols(t, pj);
            for (;;) {
                bool remainder = false;
                for (std::size_t i = t + 1; i < m_; ++i) {
                    if (A(i, t) == 0) continue;
                    Integer q = A(i, t) / A(t, t);
                    add_row(i, t, -q);
                    if (A(i, t) != 0) remainder = true;
                }
                for (std::size_t j = t + 1; j < n_; ++j) {
                    if (A(t, j) == 0) continue;
                    Integer q = A(t, j) / A(t, t);
                    add_col(j, t, -q);
                    if (A(t, j) != 0) remainder = true;
                }
                if (remainder) {
                    Integer best = abs_value(A(t, t));
                    std::size_t bi = t, bj = t;
                    for (std::size_t i = t + 1; i < m_; ++i)
                        if (A(i, t) != 0 && abs_value(A(i, t)) < best) best = abs_value(A(i, t)), bi = i, bj = t;
                    for (std::size_t j = t + 1; j < n_; ++j)
                        if (A(t, j) != 0 && abs_value(A(t, j)) < best) best = abs_value(A(t, j)), bi = t, bj = j;
                    swap_rows(t, bi);
                    swap_cols(t, bj);
                    continue;
                }
                bool fixed = false;
                for (std::size_t i = t + 1; i < m_ && !fixed; ++i)
                    for (std::size_t j = t + 1; j < n_; ++j)
                        if (A(i, j) % A(t, t) != 0) {
                            add_row(t, i, 1);
                            fixed = true;
                            break;
                        }
                if (!fixed) break;
            }
            if (A(t, t) < 0) negate_row(t);
        }
    }

    std::vector<Integer> diagonal() const {
        std::vector<Integer> d;
        for (std::size_t t = 0; t < std::min(m_, n_); ++t)
            if (A(t, t) != 0) d.push_back(A(t, t));
        return d;
    }

    SmithForm result() const {
        SmithForm f;
        f.D = IntMatrix(m_, n_);
        for (std::size_t t = 0; t < std::min(m_, n_); ++t) f.D.push_back_entry(t, t, A(t, t));
        f.invariants = diagonal();
        f.U = IntMatrix(m_, m_);
        for (std::size_t i = 0; i < m_; ++i)
            for (std::size_t j = 0; j < m_; ++j) f.U.push_back_entry(i, j, u_[i * m_ + j]);
        f.V = IntMatrix(n_, n_);
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j) f.V.push_back_entry(i, j, v_[i * n_ + j]);
        return f;
    }

private:
    Integer& A(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
    const Integer& A(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

    bool min_entry(std::size_t t, std::size_t& pi, std::size_t& pj) const {
        bool found = false;
        Integer best;
        for (std::size_t i = t; i < m_; ++i)
            for (std::size_t j = t; j < n_; ++j) {
                const Integer& x = A(i, j);
                if (x == 0) continue;
                Integer ax = abs_value(x);
                if (!found || ax < best) {
                    found = true;
                    best = ax;
                    pi = i;
                    pj = j;
                    if (best == 1) return true;
                }
            }
        return found;
    }

    // row dst += q * row src, mirrored on U.
    void add_row(std::size_t dst, std::size_t src, const Integer& q) {
        if (q == 0) return;
        for (std::size_t j = 0; j < n_; ++j)
            if (A(src, j) != 0) A(dst, j) += q * A(src, j);
        if (track_)
            for (std::size_t j = 0; j < m_; ++j)
                if (u_[src * m_ + j] != 0) u_[dst * m_ + j] += q * u_[src * m_ + j];
    }

    // col dst += q * col src, mirrored on V.
    void add_col(std::size_t dst, std::size_t src, const Integer& q) {
        if (q == 0) return;
        for (std::size_t i = 0; i < m_; ++i)
            if (A(i, src) != 0) A(i, dst) += q * A(i, src);
        if (track_)
            for (std::size_t i = 0; i < n_; ++i)
                if (v_[i * n_ + src] != 0) v_[i * n_ + dst] += q * v_[i * n_ + src];
    }

    void swap_rows(std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t j = 0; j < n_; ++j) std::swap(A(a, j), A(b, j));
        if (track_)
            for (std::size_t j = 0; j < m_; ++j) std::swap(u_[a * m_ + j], u_[b * m_ + j]);
    }

    void swap_cols(std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t i = 0; i < m_; ++i) std::swap(A(i, a), A(i, b));
        if (track_)
            for (std::size_t i = 0; i < n_; ++i) std::swap(v_[i * n_ + a], v_[i * n_ + b]);
    }

    void negate_row(std::size_t r) {
        for (std::size_t j = 0; j < n_; ++j) A(r, j) = -A(r, j);
        if (track_)
            for (std::size_t j = 0; j < m_; ++j) u_[r * m_ + j] = -u_[r * m_ + j];
    }

    std::size_t m_, n_;
    bool track_;
    std::vector<Integer> a_, u_, v_;
};

}  // namespace detail

namespace detail {

/// Invariant factors of diag(d_1, ..., d_k) for positive d_i.
inline std::vector<Integer> divisibility_chain(std::vector<Integer> d) {
    std::size_t units = 0;
    std::vector<Integer> rest;
    for (auto& v : d) {
        if (v == 1)
            ++units;
        else
            rest.push_back(std::move(v));
    }
    for (std::size_t i = 0; i < rest.size(); ++i)
        for (std::size_t j = i + 1; j < rest.size(); ++j) {
            if (rest[j] % rest[i] == 0) continue;
            Integer g = boost::multiprecision::gcd(rest[i], rest[j]);
            Integer l = rest[i] / g * rest[j];
            rest[i] = g;
            rest[j] = l;
        }
    std::vector<Integer> out(units, Integer(1));
    out.insert(out.end(), rest.begin(), rest.end());
    return out;
}

}  // namespace detail

/// U·M·V = D with U, V unimodular and D in Smith normal form.
inline SmithForm smith_normal_form(const IntMatrix& m) {
    detail::DenseSmith w(m, true);
    w.reduce();
    return w.result();
}

/// Nonzero invariant factors of M (no transforms); handles large sparse input.
inline std::vector<Integer> smith_invariants(const IntMatrix& input) {
    const IntMatrix m = input.rows() < input.cols() ? input.transpose() : input;
    const std::size_t nrows = m.rows(), ncols = m.cols();
    std::vector<IntMatrix::Row> rows(nrows);
    for (std::size_t i = 0; i < nrows; ++i) rows[i] = m.row(i);

    std::vector<std::size_t> col_count(ncols, 0);
    std::vector<std::vector<Index>> col_rows(ncols);
    for (std::size_t i = 0; i < nrows; ++i)
        for (Index c : rows[i].cols) {
            ++col_count[c];
            col_rows[c].push_back(static_cast<Index>(i));
        }
    std::vector<char> active(nrows, 1), no_unit(ncols, 0);
    std::vector<Integer> inv;

    auto entry = [&](Index r, Index c) -> const Integer* {
        const auto& row = rows[r];
        auto it = std::lower_bound(row.cols.begin(), row.cols.end(), c);
        if (it == row.cols.end() || *it != c) return nullptr;
        return &row.vals[static_cast<std::size_t>(it - row.cols.begin())];
    };

    // A non-unit pivot is usable when it divides every entry of its row and
    // column: clearing the column then leaves the row removable by column
    // operations that touch nothing else.
    auto dividing_pivot = [&](Index c, const std::vector<Index>& live) -> std::int64_t {
        std::int64_t best = -1;
        for (Index r : live)
            if (best < 0 || abs_value(*entry(r, c)) < abs_value(*entry(static_cast<Index>(best), c))) best = r;
        if (best < 0) return -1;
        const Integer p = *entry(static_cast<Index>(best), c);
        for (Index r : live)
            if (*entry(r, c) % p != 0) return -1;
        for (const auto& v : rows[static_cast<std::size_t>(best)].vals)
            if (v % p != 0) return -1;
        return best;
    };

    for (;;) {
        // Column with fewest entries that may still hold a usable pivot.
        std::size_t best_col = ncols;
        for (std::size_t c = 0; c < ncols; ++c)
            if (col_count[c] > 0 && !no_unit[c] && (best_col == ncols || col_count[c] < col_count[best_col]))
                best_col = c;
        if (best_col == ncols) break;
        const Index c = static_cast<Index>(best_col);

        // Compact the row list and pick the shortest row with a unit entry.
        std::vector<Index> live;
        std::sort(col_rows[c].begin(), col_rows[c].end());
        col_rows[c].erase(std::unique(col_rows[c].begin(), col_rows[c].end()), col_rows[c].end());
        std::int64_t pivot_row = -1;
        for (Index r : col_rows[c]) {
            if (!active[r]) continue;
            const Integer* v = entry(r, c);
            if (!v) continue;
            live.push_back(r);
            if ((*v == 1 || *v == -1) &&
                (pivot_row < 0 || rows[r].size() < rows[static_cast<std::size_t>(pivot_row)].size()))
                pivot_row = r;
        }
        col_rows[c] = live;
        if (pivot_row < 0) pivot_row = dividing_pivot(c, live);
        if (pivot_row < 0) {
            no_unit[c] = 1;
            continue;
        }
        const Index pr = static_cast<Index>(pivot_row);
        const Integer p = *entry(pr, c);
        for (Index r : live) {
            if (r == pr) continue;
            Integer coef = -(*entry(r, c) / p);
            for (Index cc : rows[r].cols) --col_count[cc];
            IntMatrix::Row merged = IntMatrix::merge(rows[r], rows[pr], coef);
            std::size_t k = 0;
            for (Index cc : merged.cols) {
                ++col_count[cc];
                while (k < rows[r].cols.size() && rows[r].cols[k] < cc) ++k;
                if (k == rows[r].cols.size() || rows[r].cols[k] != cc) col_rows[cc].push_back(r);
            }
            rows[r] = std::move(merged);
        }
        for (Index cc : rows[pr].cols) {
            --col_count[cc];
            no_unit[cc] = 0;
        }
        active[pr] = 0;
        col_rows[c].clear();
        inv.push_back(abs_value(p));
    }

    // Dense finish on whatever is left.
    std::vector<Index> rest_rows, rest_cols;
    std::vector<std::int64_t> col_pos(ncols, -1);
    for (std::size_t i = 0; i < nrows; ++i)
        if (active[i] && !rows[i].empty()) rest_rows.push_back(static_cast<Index>(i));
    for (std::size_t c = 0; c < ncols; ++c)
        if (col_count[c] > 0) {
            col_pos[c] = static_cast<std::int64_t>(rest_cols.size());
            rest_cols.push_back(static_cast<Index>(c));
        }
    if (!rest_rows.empty()) {
        std::vector<Integer> dense(rest_rows.size() * rest_cols.size());
        for (std::size_t i = 0; i < rest_rows.size(); ++i) {
            const auto& row = rows[rest_rows[i]];
            for (std::size_t k = 0; k < row.size(); ++k)
                dense[i * rest_cols.size() + static_cast<std::size_t>(col_pos[row.cols[k]])] = row.vals[k];
        }
        detail::DenseSmith w(std::move(dense), rest_rows.size(), rest_cols.size());
        w.reduce();
        for (auto& d : w.diagonal()) inv.push_back(d);
    }
    return detail::divisibility_chain(std::move(inv));
}

inline std::size_t matrix_rank(const IntMatrix& m) { return smith_invariants(m).size(); }

/// Columns form a basis of ker M ⊂ Z^cols (a saturated sublattice).
inline IntMatrix kernel_basis(const IntMatrix& m) {
    if (m.cols() == 0) return IntMatrix(0, 0);
    SmithForm f = smith_normal_form(m);
    std::vector<Index> idx;
    for (std::size_t j = f.rank(); j < m.cols(); ++j) idx.push_back(static_cast<Index>(j));
    return f.V.select_cols(idx);
}

/// Columns form a basis of the lattice spanned by the columns of G.
inline IntMatrix column_lattice_basis(const IntMatrix& g) {
    if (g.cols() == 0) return IntMatrix(g.rows(), 0);
    SmithForm f = smith_normal_form(g);
    std::vector<Index> idx;
    for (std::size_t j = 0; j < f.rank(); ++j) idx.push_back(static_cast<Index>(j));
    return (g * f.V).select_cols(idx);
}

/// Solves B·X = Y for integer X, where B has full column rank.
/// Returns nullopt when some column of Y is outside the lattice spanned by B.
inline std::optional<IntMatrix> solve_in_lattice(const IntMatrix& basis, const IntMatrix& y) {
    if (basis.rows() != y.rows()) throw MalformedInput("solve_in_lattice row mismatch");
    const std::size_t s = basis.cols();
    if (s == 0) {
        if (!y.is_zero()) return std::nullopt;
        return IntMatrix(0, y.cols());
    }
    SmithForm f = smith_normal_form(basis);
    if (f.rank() != s) throw MalformedInput("solve_in_lattice: basis not of full column rank");
    IntMatrix w = f.U * y;
    IntMatrix z(s, y.cols());
    for (std::size_t i = 0; i < w.rows(); ++i) {
        const auto& row = w.row(i);
        for (std::size_t k = 0; k < row.size(); ++k) {
            if (i >= s) return std::nullopt;
            const Integer& d = f.invariants[i];
            if (row.vals[k] % d != 0) return std::nullopt;
            z.push_back_entry(i, row.cols[k], row.vals[k] / d);
        }
    }
    std::vector<Index> idx;
    for (std::size_t j = 0; j < s; ++j) idx.push_back(static_cast<Index>(j));
    return f.V.select_cols(idx) * z;
}

}  // namespace diffcech
