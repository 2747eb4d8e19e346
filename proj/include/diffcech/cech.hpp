/**
 * Čech nerve of a map of finite graphs B -> X: degree k is the (k+1)-fold
 * fiber power of B over X. Each fiber power carries the induced graph (two
 * tuples over the same or different points are adjacent when every
 * coordinate pair is an edge or an equal vertex) and its components are
 * computed by union-find.
 */
#pragma once

#include <memory>
#include <string>
#include <vector>

#include "errors.hpp"
#include "probe_graph.hpp"
#include "simplicial_set.hpp"
#include "union_find.hpp"

namespace diffcech {

namespace detail {

/// Mixed-radix indexing of fiber-power tuples, grouped by base point and ordered lexicographically.
class FiberPowers {
public:
    FiberPowers(const std::vector<Index>& pi, std::size_t x_size, std::size_t n_max, std::size_t cap)
        : pi_(pi), fibers_(x_size), position_(pi.size()), base_(n_max + 1), counts_(n_max + 1, 0) {
        for (Index b = 0; b < pi.size(); ++b) {
            if (pi[b] >= x_size) throw MalformedInput("cech nerve: label out of range");
            position_[b] = static_cast<Index>(fibers_[pi[b]].size());
            fibers_[pi[b]].push_back(b);
        }
        for (std::size_t x = 0; x < x_size; ++x)
            if (fibers_[x].empty()) throw ModelError("not a cover: point #" + std::to_string(x) + " has empty fiber");
        for (std::size_t k = 0; k <= n_max; ++k) {
            base_[k].resize(x_size + 1);
            std::size_t total = 0;
            for (std::size_t x = 0; x < x_size; ++x) {
                base_[k][x] = total;
                std::size_t p = 1;
                for (std::size_t j = 0; j <= k; ++j) {
                    p *= fibers_[x].size();
                    if (p > cap) throw ResourceLimit("fiber power degree " + std::to_string(k) + " exceeds the cap");
                }
                total += p;
                if (total > cap)
                    throw ResourceLimit("fiber power degree " + std::to_string(k) + " has more than " +
                                        std::to_string(cap) + " tuples");
            }
            base_[k][x_size] = total;
            counts_[k] = total;
        }
    }

    std::size_t count(std::size_t k) const { return counts_[k]; }

    /// Decodes simplex s of degree k into its base point and B-vertices.
    Index decode(std::size_t k, Index s, std::vector<Index>& tuple) const {
        const auto& b = base_[k];
        Index x = static_cast<Index>(std::upper_bound(b.begin(), b.end(), std::size_t(s)) - b.begin() - 1);
        std::size_t r = s - b[x];
        const std::size_t f = fibers_[x].size();
        tuple.assign(k + 1, 0);
        for (std::size_t j = k + 1; j-- > 0;) {
            tuple[j] = fibers_[x][r % f];
            r /= f;
        }
        return x;
    }

    Index encode(std::size_t k, const std::vector<Index>& tuple) const {
        const Index x = pi_[tuple[0]];
        const std::size_t f = fibers_[x].size();
        std::size_t r = 0;
        for (std::size_t j = 0; j <= k; ++j) r = r * f + position_[tuple[j]];
        return static_cast<Index>(base_[k][x] + r);
    }

private:
    std::vector<Index> pi_;
    std::vector<std::vector<Index>> fibers_;
    std::vector<Index> position_;
    std::vector<std::vector<std::size_t>> base_;
    std::vector<std::size_t> counts_;
};

}  // namespace detail

/// Čech nerve of pi : B -> X (pi surjective onto 0..x_size-1), with induced-graph components.
inline TruncatedSimplicialSet cech_nerve(const ProbeGraph& b, const std::vector<Index>& pi, std::size_t x_size,
                                         std::size_t n_max, std::size_t cap = 10000000) {
    if (pi.size() != b.size()) throw MalformedInput("cech nerve: label count does not match vertex count");
    auto fp = std::make_shared<detail::FiberPowers>(pi, x_size, n_max, cap);
    TruncatedSimplicialSet out(n_max);
    std::vector<Index> t, u;
    for (std::size_t k = 0; k <= n_max; ++k) {
        const std::size_t n = fp->count(k);
        out.set_count(k, n);
        for (std::size_t i = 0; k > 0 && i <= k; ++i) out.face_map(k, i).resize(n);
        for (std::size_t i = 0; k < n_max && i <= k; ++i) out.degeneracy_map(k, i).resize(n);
        UnionFind uf(n);
        std::size_t work = 0;
        for (Index s = 0; s < n; ++s) {
            fp->decode(k, s, t);
            for (std::size_t i = 0; k > 0 && i <= k; ++i) {
                u = t;
                u.erase(u.begin() + static_cast<std::ptrdiff_t>(i));
                out.face_map(k, i)[s] = fp->encode(k - 1, u);
            }
            for (std::size_t i = 0; k < n_max && i <= k; ++i) {
                u = t;
                u.insert(u.begin() + static_cast<std::ptrdiff_t>(i), t[i]);
                out.degeneracy_map(k, i)[s] = fp->encode(k + 1, u);
            }
            // Neighbours over each label y reachable from the first coordinate.
            std::vector<Index> labels{pi[t[0]]};
            for (Index v : b.neighbors(t[0])) labels.push_back(pi[v]);
            std::sort(labels.begin(), labels.end());
            labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
            for (Index y : labels) {
                std::vector<std::vector<Index>> choices(k + 1);
                bool ok = true;
                for (std::size_t j = 0; j <= k && ok; ++j) {
                    if (pi[t[j]] == y) choices[j].push_back(t[j]);
                    for (Index v : b.neighbors(t[j]))
                        if (pi[v] == y) choices[j].push_back(v);
                    ok = !choices[j].empty();
                }
                if (!ok) continue;
                std::vector<std::size_t> digit(k + 1, 0);
                u.assign(k + 1, 0);
                while (true) {
                    for (std::size_t j = 0; j <= k; ++j) u[j] = choices[j][digit[j]];
                    uf.unite(s, fp->encode(k, u));
                    if (++work > 50 * cap) throw ResourceLimit("cech nerve: induced graph too large");
                    std::size_t j = k + 1;
                    while (j-- > 0) {
                        if (++digit[j] < choices[j].size()) break;
                        digit[j] = 0;
                    }
                    if (j == static_cast<std::size_t>(-1)) break;
                }
            }
        }
        std::size_t c = 0;
        auto labels = uf.labels(&c);
        out.set_components(k, std::move(labels), c);
    }
    auto names = std::make_shared<std::vector<std::string>>(b.vertices());
    out.set_describer([fp, names](std::size_t k, Index s) {
        std::vector<Index> t;
        fp->decode(k, s, t);
        std::string r = "(";
        for (std::size_t j = 0; j < t.size(); ++j) r += (j ? ", " : "") + (*names)[t[j]];
        return r + ")";
    });
    return out;
}

}  // namespace diffcech
