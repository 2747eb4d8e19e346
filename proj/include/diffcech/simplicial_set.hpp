/**
 * Truncated finite simplicial sets with explicit face and degeneracy tables,
 * optional component partitions in every degree, identity verification,
 * path components and coskeletality checks.
 */
#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "matrix.hpp"
#include "union_find.hpp"

namespace diffcech {

class TruncatedSimplicialSet {
public:
    using Describer = std::function<std::string(std::size_t, Index)>;

    struct NormalForm {
        std::size_t degree = 0;     // dimension of the non-degenerate generator
        Index generator = 0;
        std::vector<std::size_t> word;  // x = s_{word[0]} ... s_{word[r-1]} generator, strictly decreasing
    };

    TruncatedSimplicialSet() = default;

    explicit TruncatedSimplicialSet(std::size_t n_max)
        : n_max_(n_max), counts_(n_max + 1, 0), faces_(n_max + 1), degens_(n_max + 1),
          components_(n_max + 1), component_counts_(n_max + 1, 0) {
        for (std::size_t k = 0; k <= n_max; ++k) {
            faces_[k].resize(k == 0 ? 0 : k + 1);
            degens_[k].resize(k == n_max ? 0 : k + 1);
        }
    }

    std::size_t n_max() const { return n_max_; }
    std::size_t count(std::size_t k) const { return counts_.at(k); }
    void set_count(std::size_t k, std::size_t n) { counts_.at(k) = n; }

    /// d_i : X_k -> X_{k-1}.
    Index face(std::size_t k, std::size_t i, Index x) const { return faces_[k][i][x]; }
    /// s_i : X_k -> X_{k+1}.
    Index degeneracy(std::size_t k, std::size_t i, Index x) const { return degens_[k][i][x]; }

    const std::vector<Index>& face_map(std::size_t k, std::size_t i) const { return faces_.at(k).at(i); }
    const std::vector<Index>& degeneracy_map(std::size_t k, std::size_t i) const { return degens_.at(k).at(i); }
    std::vector<Index>& face_map(std::size_t k, std::size_t i) { return faces_.at(k).at(i); }
    std::vector<Index>& degeneracy_map(std::size_t k, std::size_t i) { return degens_.at(k).at(i); }

    bool has_components() const { return has_components_; }

    void set_components(std::size_t k, std::vector<Index> labels, std::size_t count) {
        components_.at(k) = std::move(labels);
        component_counts_.at(k) = count;
        has_components_ = true;
    }

    /// Component of a simplex; without component data every simplex is its own component.
    Index component(std::size_t k, Index x) const { return has_components_ ? components_[k][x] : x; }

    std::size_t component_count(std::size_t k) const {
        return has_components_ ? component_counts_[k] : counts_[k];
    }

    const std::vector<Index>& component_labels(std::size_t k) const { return components_.at(k); }

    void set_describer(Describer d) { describe_ = std::move(d); }

    std::string describe(std::size_t k, Index x) const {
        if (describe_) return describe_(k, x);
        std::ostringstream os;
        os << k << "-simplex #" << x;
        return os.str();
    }

    bool is_degenerate(std::size_t k, Index x) const {
        for (std::size_t i = 0; k > 0 && i < k; ++i)
            if (degens_[k - 1][i][faces_[k][i][x]] == x) return true;
        return false;
    }

    /// Eilenberg–Zilber decomposition: peel off the largest degeneracy index first.
    NormalForm normal_form(std::size_t k, Index x) const {
        NormalForm nf;
        while (k > 0) {
            std::size_t found = k;
            for (std::size_t i = k; i-- > 0;) {
                if (degens_[k - 1][i][faces_[k][i][x]] == x) {
                    found = i;
                    break;
                }
            }
            if (found == k) break;
            nf.word.push_back(found);
            x = faces_[k][found][x];
            --k;
        }
        nf.degree = k;
        nf.generator = x;
        return nf;
    }

    std::size_t nondegenerate_count(std::size_t k) const {
        std::size_t n = 0;
        for (Index x = 0; x < counts_[k]; ++x)
            if (!is_degenerate(k, x)) ++n;
        return n;
    }

    /// Induced map on components of a face map, or nullopt if it does not respect components.
    std::optional<std::vector<Index>> component_face(std::size_t k, std::size_t i) const {
        return induced(faces_[k][i], k, k - 1);
    }

    std::optional<std::vector<Index>> component_degeneracy(std::size_t k, std::size_t i) const {
        return induced(degens_[k][i], k, k + 1);
    }

    /// Same counts, structure maps and component partitions (component numbering and names ignored).
    friend bool operator==(const TruncatedSimplicialSet& a, const TruncatedSimplicialSet& b) {
        if (a.n_max_ != b.n_max_ || a.counts_ != b.counts_ || a.faces_ != b.faces_ || a.degens_ != b.degens_)
            return false;
        for (std::size_t k = 0; k <= a.n_max_; ++k) {
            std::vector<Index> ab(a.component_count(k), UINT32_MAX), ba(b.component_count(k), UINT32_MAX);
            for (Index x = 0; x < a.counts_[k]; ++x) {
                Index ca = a.component(k, x), cb = b.component(k, x);
                if (ab[ca] == UINT32_MAX) ab[ca] = cb;
                if (ba[cb] == UINT32_MAX) ba[cb] = ca;
                if (ab[ca] != cb || ba[cb] != ca) return false;
            }
        }
        return true;
    }

private:
    std::optional<std::vector<Index>> induced(const std::vector<Index>& f, std::size_t from, std::size_t to) const {
        std::vector<Index> out(component_count(from), UINT32_MAX);
        for (Index x = 0; x < counts_[from]; ++x) {
            Index c = component(from, x), t = component(to, f[x]);
            if (out[c] == UINT32_MAX)
                out[c] = t;
            else if (out[c] != t)
                return std::nullopt;
        }
        return out;
    }

    std::size_t n_max_ = 0;
    std::vector<std::size_t> counts_;
    std::vector<std::vector<std::vector<Index>>> faces_;
    std::vector<std::vector<std::vector<Index>>> degens_;
    bool has_components_ = false;
    std::vector<std::vector<Index>> components_;
    std::vector<std::size_t> component_counts_;
    Describer describe_;
};

struct IdentityViolation {
    std::string identity;
    std::size_t degree = 0;
    Index simplex = 0;
    std::string witness;
};

namespace detail {

inline std::string face_name(char op, std::size_t i) { return std::string(1, op) + "_" + std::to_string(i); }

}  // namespace detail

/// Checks every simplicial identity up to the truncation degree; one entry per failing identity.
inline std::vector<IdentityViolation> verify_simplicial_identities(const TruncatedSimplicialSet& x) {
    using detail::face_name;
    std::vector<IdentityViolation> out;
    const std::size_t top = x.n_max();
    auto report = [&](std::string id, std::size_t k, Index s) {
        out.push_back({std::move(id), k, s, x.describe(k, s)});
    };
    for (std::size_t k = 0; k <= top; ++k) {
        for (std::size_t i = 0; k > 0 && i <= k; ++i)
            if (x.face_map(k, i).size() != x.count(k)) throw MalformedInput("face table has wrong length");
        for (std::size_t i = 0; k < top && i <= k; ++i)
            if (x.degeneracy_map(k, i).size() != x.count(k)) throw MalformedInput("degeneracy table has wrong length");
    }
    // d_i d_j = d_{j-1} d_i for i < j, on X_k with k >= 2.
    for (std::size_t k = 2; k <= top; ++k)
        for (std::size_t j = 1; j <= k; ++j)
            for (std::size_t i = 0; i < j; ++i)
                for (Index s = 0; s < x.count(k); ++s)
                    if (x.face(k - 1, i, x.face(k, j, s)) != x.face(k - 1, j - 1, x.face(k, i, s))) {
                        report(face_name('d', i) + face_name('d', j) + " = " + face_name('d', j - 1) + face_name('d', i), k, s);
                        break;
                    }
    // s_i s_j = s_{j+1} s_i for i <= j, on X_k with k + 2 <= top.
    for (std::size_t k = 0; k + 2 <= top; ++k)
        for (std::size_t j = 0; j <= k; ++j)
            for (std::size_t i = 0; i <= j; ++i)
                for (Index s = 0; s < x.count(k); ++s)
                    if (x.degeneracy(k + 1, i, x.degeneracy(k, j, s)) != x.degeneracy(k + 1, j + 1, x.degeneracy(k, i, s))) {
                        report(face_name('s', i) + face_name('s', j) + " = " + face_name('s', j + 1) + face_name('s', i), k, s);
                        break;
                    }
    // Mixed identities d_i s_j on X_k, k + 1 <= top.
    for (std::size_t k = 0; k + 1 <= top; ++k)
        for (std::size_t j = 0; j <= k; ++j)
            for (std::size_t i = 0; i <= k + 1; ++i) {
                std::string name = face_name('d', i) + face_name('s', j) + " = ";
                if (i < j)
                    name += face_name('s', j - 1) + face_name('d', i);
                else if (i == j || i == j + 1)
                    name += "id";
                else
                    name += face_name('s', j) + face_name('d', i - 1);
                for (Index s = 0; s < x.count(k); ++s) {
                    Index lhs = x.face(k + 1, i, x.degeneracy(k, j, s));
                    Index rhs;
                    if (i < j)
                        rhs = x.degeneracy(k - 1, j - 1, x.face(k, i, s));
                    else if (i == j || i == j + 1)
                        rhs = s;
                    else
                        rhs = x.degeneracy(k - 1, j, x.face(k, i - 1, s));
                    if (lhs != rhs) {
                        report(name, k, s);
                        break;
                    }
                }
            }
    if (x.has_components()) {
        for (std::size_t k = 1; k <= top; ++k)
            for (std::size_t i = 0; i <= k; ++i)
                if (!x.component_face(k, i)) report(face_name('d', i) + " respects components", k, 0);
        for (std::size_t k = 0; k < top; ++k)
            for (std::size_t i = 0; i <= k; ++i)
                if (!x.component_degeneracy(k, i)) report(face_name('s', i) + " respects components", k, 0);
    }
    return out;
}

struct Partition {
    std::vector<Index> labels;
    std::size_t count = 0;
};

/// Coequalizer of d_0, d_1 : X_1 -> X_0, further collapsed by degree-0 components.
inline Partition pi0(const TruncatedSimplicialSet& x) {
    if (x.n_max() < 1) throw BoundError("pi0 needs simplices up to degree 1");
    UnionFind uf(x.count(0));
    for (Index e = 0; e < x.count(1); ++e) uf.unite(x.face(1, 0, e), x.face(1, 1, e));
    if (x.has_components()) {
        std::vector<Index> first(x.component_count(0), UINT32_MAX);
        for (Index v = 0; v < x.count(0); ++v) {
            Index c = x.component(0, v);
            if (first[c] == UINT32_MAX)
                first[c] = v;
            else
                uf.unite(first[c], v);
        }
    }
    Partition p;
    p.labels = uf.labels(&p.count);
    return p;
}

struct CoskeletalResult {
    bool holds = true;
    std::size_t degree = 0;           // n of the failing boundary
    std::vector<Index> boundary;      // (y_0, ..., y_n) in X_{n-1}
    std::size_t fillers = 0;
};

/// Every compatible boundary of an n-simplex, k < n <= n_probe, must have exactly one filler.
inline CoskeletalResult is_k_coskeletal(const TruncatedSimplicialSet& x, std::size_t k, std::size_t n_probe) {
    if (!(k < n_probe && n_probe <= x.n_max())) throw BoundError("is_k_coskeletal needs k < n_probe <= n_max");
    CoskeletalResult res;
    for (std::size_t n = k + 1; n <= n_probe; ++n) {
        // Sorted boundary tuples of all n-simplices; equal neighbours mean multiple fillers.
        const std::size_t w = n + 1;
        std::vector<Index> flat(x.count(n) * w);
        std::vector<std::size_t> order(x.count(n));
        for (Index s = 0; s < x.count(n); ++s) {
            order[s] = s;
            for (std::size_t i = 0; i <= n; ++i) flat[s * w + i] = x.face(n, i, s);
        }
        auto less = [&](std::size_t a, std::size_t b) {
            return std::lexicographical_compare(flat.begin() + a * w, flat.begin() + (a + 1) * w, flat.begin() + b * w,
                                                flat.begin() + (b + 1) * w);
        };
        std::sort(order.begin(), order.end(), less);
        auto same = [&](std::size_t a, std::size_t b) {
            return std::equal(flat.begin() + a * w, flat.begin() + (a + 1) * w, flat.begin() + b * w);
        };
        for (std::size_t t = 0; t + 1 < order.size(); ++t)
            if (same(order[t], order[t + 1])) {
                std::size_t c = 2;
                while (t + c < order.size() && same(order[t], order[t + c])) ++c;
                res = {false, n, {flat.begin() + order[t] * w, flat.begin() + (order[t] + 1) * w}, c};
                return res;
            }
        auto filler_count = [&](const std::vector<Index>& b) -> std::size_t {
            auto it = std::lower_bound(order.begin(), order.end(), b, [&](std::size_t s, const std::vector<Index>& key) {
                return std::lexicographical_compare(flat.begin() + s * w, flat.begin() + (s + 1) * w, key.begin(),
                                                    key.end());
            });
            if (it != order.end() && std::equal(b.begin(), b.end(), flat.begin() + *it * w)) return 1;
            return 0;
        };
        // Enumerate compatible boundaries: d_i y_j = d_{j-1} y_i for i < j.
        const std::size_t m = n - 1;
        std::vector<std::vector<Index>> by_d0;
        if (m > 0) {
            by_d0.assign(x.count(m - 1), {});
            for (Index y = 0; y < x.count(m); ++y) by_d0[x.face(m, 0, y)].push_back(y);
        }
        std::vector<Index> tuple(w);
        std::optional<CoskeletalResult> failure;
        std::function<void(std::size_t)> extend = [&](std::size_t j) {
            if (failure) return;
            if (j == w) {
                std::size_t c = filler_count(tuple);
                if (c != 1) failure = CoskeletalResult{false, n, tuple, c};
                return;
            }
            auto accept = [&](Index y) {
                for (std::size_t i = 1; i < j; ++i)
                    if (x.face(m, i, y) != x.face(m, j - 1, tuple[i])) return false;
                return true;
            };
            if (j == 0 || m == 0) {
                for (Index y = 0; y < x.count(m) && !failure; ++y) {
                    tuple[j] = y;
                    extend(j + 1);
                }
                return;
            }
            for (Index y : by_d0[x.face(m, j - 1, tuple[0])]) {
                if (failure) return;
                if (!accept(y)) continue;
                tuple[j] = y;
                extend(j + 1);
            }
        };
        extend(0);
        if (failure) return *failure;
    }
    return res;
}

/// The constant simplicial set on `points` points, with each point its own component.
inline TruncatedSimplicialSet constant_simplicial_set(std::size_t points, std::size_t n_max) {
    TruncatedSimplicialSet x(n_max);
    std::vector<Index> id(points);
    for (std::size_t i = 0; i < points; ++i) id[i] = static_cast<Index>(i);
    for (std::size_t k = 0; k <= n_max; ++k) {
        x.set_count(k, points);
        for (std::size_t i = 0; k > 0 && i <= k; ++i) x.face_map(k, i) = id;
        for (std::size_t i = 0; k < n_max && i <= k; ++i) x.degeneracy_map(k, i) = id;
        x.set_components(k, id, points);
    }
    return x;
}

}  // namespace diffcech
