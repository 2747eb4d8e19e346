/**
 * Exact integer matrices.
 *
 * IntMatrix keeps each row as a sorted list of nonzero entries. Every
 * matrix in the library acts on column vectors, so a map Z^n -> Z^m is an
 * m x n matrix and composition g∘f is the product g * f.
 */
#pragma once

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "errors.hpp"

namespace diffcech {

using Integer = boost::multiprecision::cpp_int;

using Index = std::uint32_t;

inline Integer abs_value(const Integer& x) { return x < 0 ? Integer(-x) : x; }

class IntMatrix {
public:
    struct Row {
        std::vector<Index> cols;
        std::vector<Integer> vals;

        std::size_t size() const { return cols.size(); }
        bool empty() const { return cols.empty(); }
    };

    IntMatrix() = default;
    IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows) {}

    IntMatrix(std::initializer_list<std::initializer_list<long long>> dense) {
        rows_ = dense.size();
        cols_ = rows_ ? dense.begin()->size() : 0;
        data_.resize(rows_);
        std::size_t i = 0;
        for (const auto& r : dense) {
            if (r.size() != cols_)
                throw MalformedInput("ragged matrix literal");
            std::size_t j = 0;
            for (long long v : r) {
                if (v != 0) {
                    data_[i].cols.push_back(static_cast<Index>(j));
                    data_[i].vals.emplace_back(v);
                }
                ++j;
            }
            ++i;
        }
    }

    static IntMatrix identity(std::size_t n) {
        IntMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.push_back_entry(i, i, 1);
        return m;
    }

    static IntMatrix scalar(std::size_t n, const Integer& s) {
        IntMatrix m(n, n);
        if (s != 0)
            for (std::size_t i = 0; i < n; ++i) m.push_back_entry(i, i, s);
        return m;
    }

    static IntMatrix from_dense(const std::vector<std::vector<Integer>>& d, std::size_t cols) {
        IntMatrix m(d.size(), cols);
        for (std::size_t i = 0; i < d.size(); ++i)
            for (std::size_t j = 0; j < cols; ++j)
                if (d[i][j] != 0) m.push_back_entry(i, j, d[i][j]);
        return m;
    }

    /// Pullback along f: [n] -> [m] as an n x m 0/1 matrix; row i has a single 1 at f(i).
    static IntMatrix selection(std::span<const Index> f, std::size_t target_size) {
        IntMatrix m(f.size(), target_size);
        for (std::size_t i = 0; i < f.size(); ++i) m.push_back_entry(i, f[i], 1);
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    const Row& row(std::size_t i) const { return data_[i]; }
    Row& row(std::size_t i) { return data_[i]; }

    Integer at(std::size_t i, std::size_t j) const {
        const Row& r = data_[i];
        auto it = std::lower_bound(r.cols.begin(), r.cols.end(), static_cast<Index>(j));
        if (it == r.cols.end() || *it != j) return 0;
        return r.vals[static_cast<std::size_t>(it - r.cols.begin())];
    }

    void set(std::size_t i, std::size_t j, const Integer& v) {
        Row& r = data_[i];
        auto it = std::lower_bound(r.cols.begin(), r.cols.end(), static_cast<Index>(j));
        auto pos = static_cast<std::size_t>(it - r.cols.begin());
        if (it != r.cols.end() && *it == j) {
            if (v == 0) {
                r.cols.erase(it);
                r.vals.erase(r.vals.begin() + static_cast<std::ptrdiff_t>(pos));
            } else {
                r.vals[pos] = v;
            }
        } else if (v != 0) {
            r.cols.insert(it, static_cast<Index>(j));
            r.vals.insert(r.vals.begin() + static_cast<std::ptrdiff_t>(pos), v);
        }
    }

    void add_to(std::size_t i, std::size_t j, const Integer& v) {
        if (v == 0) return;
        set(i, j, at(i, j) + v);
    }

    /// Appends an entry; caller guarantees increasing column order within the row.
    void push_back_entry(std::size_t i, std::size_t j, const Integer& v) {
        if (v == 0) return;
        data_[i].cols.push_back(static_cast<Index>(j));
        data_[i].vals.push_back(v);
    }

    std::size_t nonzeros() const {
        std::size_t n = 0;
        for (const auto& r : data_) n += r.size();
        return n;
    }

    bool is_zero() const {
        return std::all_of(data_.begin(), data_.end(), [](const Row& r) { return r.empty(); });
    }

    std::vector<std::vector<Integer>> to_dense() const {
        std::vector<std::vector<Integer>> d(rows_, std::vector<Integer>(cols_));
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < data_[i].size(); ++k) d[i][data_[i].cols[k]] = data_[i].vals[k];
        return d;
    }

    IntMatrix transpose() const {
        IntMatrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < data_[i].size(); ++k)
                t.push_back_entry(data_[i].cols[k], i, data_[i].vals[k]);
        return t;
    }

    IntMatrix operator-() const {
        IntMatrix r = *this;
        for (auto& row : r.data_)
            for (auto& v : row.vals) v = -v;
        return r;
    }

    friend bool operator==(const IntMatrix& a, const IntMatrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) return false;
        for (std::size_t i = 0; i < a.rows_; ++i)
            if (a.data_[i].cols != b.data_[i].cols || a.data_[i].vals != b.data_[i].vals) return false;
        return true;
    }

    friend IntMatrix operator+(const IntMatrix& a, const IntMatrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
            throw MalformedInput("matrix sum shape mismatch");
        IntMatrix r(a.rows_, a.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i) r.data_[i] = merge(a.data_[i], b.data_[i], 1);
        return r;
    }

    friend IntMatrix operator-(const IntMatrix& a, const IntMatrix& b) { return a + (-b); }

    friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
        if (a.cols_ != b.rows_)
            throw MalformedInput("matrix product shape mismatch: " + std::to_string(a.rows_) + "x" +
                                 std::to_string(a.cols_) + " * " + std::to_string(b.rows_) + "x" +
                                 std::to_string(b.cols_));
        IntMatrix r(a.rows_, b.cols_);
        std::vector<Integer> acc(b.cols_);
        std::vector<char> touched(b.cols_, 0);
        std::vector<Index> cols;
        for (std::size_t i = 0; i < a.rows_; ++i) {
            cols.clear();
            const Row& ar = a.data_[i];
            for (std::size_t k = 0; k < ar.size(); ++k) {
                const Row& br = b.data_[ar.cols[k]];
                for (std::size_t l = 0; l < br.size(); ++l) {
                    Index c = br.cols[l];
                    if (!touched[c]) {
                        touched[c] = 1;
                        cols.push_back(c);
                        acc[c] = 0;
                    }
                    acc[c] += ar.vals[k] * br.vals[l];
                }
            }
            std::sort(cols.begin(), cols.end());
            for (Index c : cols) {
                if (acc[c] != 0) r.push_back_entry(i, c, acc[c]);
                touched[c] = 0;
            }
        }
        return r;
    }

    /// a * x + b * y row combination helper used by elimination code.
    static Row merge(const Row& x, const Row& y, const Integer& ycoef) {
        Row out;
        out.cols.reserve(x.size() + y.size());
        out.vals.reserve(x.size() + y.size());
        std::size_t i = 0, j = 0;
        while (i < x.size() || j < y.size()) {
            if (j == y.size() || (i < x.size() && x.cols[i] < y.cols[j])) {
                out.cols.push_back(x.cols[i]);
                out.vals.push_back(x.vals[i]);
                ++i;
            } else if (i == x.size() || y.cols[j] < x.cols[i]) {
                out.cols.push_back(y.cols[j]);
                out.vals.push_back(ycoef * y.vals[j]);
                ++j;
            } else {
                Integer v = x.vals[i] + ycoef * y.vals[j];
                if (v != 0) {
                    out.cols.push_back(x.cols[i]);
                    out.vals.push_back(std::move(v));
                }
                ++i;
                ++j;
            }
        }
        return out;
    }

    IntMatrix select_rows(std::span<const Index> rows) const {
        IntMatrix r(rows.size(), cols_);
        for (std::size_t i = 0; i < rows.size(); ++i) r.data_[i] = data_[rows[i]];
        return r;
    }

    IntMatrix select_cols(std::span<const Index> cols) const {
        std::vector<std::int64_t> where(cols_, -1);
        for (std::size_t j = 0; j < cols.size(); ++j) where[cols[j]] = static_cast<std::int64_t>(j);
        IntMatrix r(rows_, cols.size());
        for (std::size_t i = 0; i < rows_; ++i) {
            std::vector<std::pair<Index, Integer>> entries;
            const Row& row = data_[i];
            for (std::size_t k = 0; k < row.size(); ++k)
                if (where[row.cols[k]] >= 0) entries.emplace_back(static_cast<Index>(where[row.cols[k]]), row.vals[k]);
            std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
            for (auto& [c, v] : entries) r.push_back_entry(i, c, v);
        }
        return r;
    }

    IntMatrix block(std::size_t r0, std::size_t nrows, std::size_t c0, std::size_t ncols) const {
        IntMatrix r(nrows, ncols);
        for (std::size_t i = 0; i < nrows; ++i) {
            const Row& row = data_[r0 + i];
            for (std::size_t k = 0; k < row.size(); ++k)
                if (row.cols[k] >= c0 && row.cols[k] < c0 + ncols) r.push_back_entry(i, row.cols[k] - c0, row.vals[k]);
        }
        return r;
    }

    /// Copies `m` into this matrix with its top-left corner at (r0, c0).
    void place(const IntMatrix& m, std::size_t r0, std::size_t c0, const Integer& scale = 1) {
        if (r0 + m.rows_ > rows_ || c0 + m.cols_ > cols_)
            throw MalformedInput("block placement out of range");
        for (std::size_t i = 0; i < m.rows_; ++i) {
            Row shifted;
            const Row& src = m.data_[i];
            for (std::size_t k = 0; k < src.size(); ++k) {
                shifted.cols.push_back(static_cast<Index>(src.cols[k] + c0));
                shifted.vals.push_back(scale * src.vals[k]);
            }
            data_[r0 + i] = merge(data_[r0 + i], shifted, 1);
        }
    }

    friend IntMatrix hstack(const IntMatrix& a, const IntMatrix& b) {
        if (a.rows_ != b.rows_) throw MalformedInput("hstack row mismatch");
        IntMatrix r(a.rows_, a.cols_ + b.cols_);
        r.place(a, 0, 0);
        r.place(b, 0, a.cols_);
        return r;
    }

    friend IntMatrix vstack(const IntMatrix& a, const IntMatrix& b) {
        if (a.cols_ != b.cols_) throw MalformedInput("vstack column mismatch");
        IntMatrix r(a.rows_ + b.rows_, a.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i) r.data_[i] = a.data_[i];
        for (std::size_t i = 0; i < b.rows_; ++i) r.data_[a.rows_ + i] = b.data_[i];
        return r;
    }

    /// Kronecker product a ⊗ b; index (i, k) of the result is i * b.rows() + k.
    friend IntMatrix kronecker(const IntMatrix& a, const IntMatrix& b) {
        IntMatrix r(a.rows_ * b.rows_, a.cols_ * b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < b.rows_; ++k) {
                std::size_t row = i * b.rows_ + k;
                const Row& ar = a.data_[i];
                const Row& br = b.data_[k];
                for (std::size_t p = 0; p < ar.size(); ++p)
                    for (std::size_t q = 0; q < br.size(); ++q)
                        r.push_back_entry(row, ar.cols[p] * b.cols_ + br.cols[q], ar.vals[p] * br.vals[q]);
            }
        return r;
    }

    friend std::ostream& operator<<(std::ostream& os, const IntMatrix& m) {
        auto d = m.to_dense();
        os << "[";
        for (std::size_t i = 0; i < m.rows_; ++i) {
            os << (i ? ", [" : "[");
            for (std::size_t j = 0; j < m.cols_; ++j) os << (j ? "," : "") << d[i][j];
            os << "]";
        }
        return os << "]";
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Row> data_;
};

/// Exact determinant by fraction-free (Bareiss) elimination.
inline Integer determinant(const IntMatrix& m) {
    if (m.rows() != m.cols()) throw MalformedInput("determinant of non-square matrix");
    std::size_t n = m.rows();
    if (n == 0) return 1;
    auto a = m.to_dense();
    Integer sign = 1, prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a[k][k] == 0) {
            std::size_t s = k + 1;
            while (s < n && a[s][k] == 0) ++s;
            if (s == n) return 0;
            std::swap(a[k], a[s]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
        prev = a[k][k];
    }
    return sign * a[n - 1][n - 1];
}

}  // namespace diffcech
