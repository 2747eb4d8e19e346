/**
 * Finite groups by multiplication table, with the usual small families and
 * the one-object groupoid view.
 */
#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "category.hpp"
#include "fg_abelian.hpp"

namespace diffcech {

class FiniteGroup {
public:
    FiniteGroup() : FiniteGroup({"e"}, {{0}}, 0) {}

    /// mul[a][b] is the product a·b; validates the group axioms exhaustively.
    FiniteGroup(std::vector<std::string> names, std::vector<std::vector<Index>> mul, Index unit)
        : names_(std::move(names)), mul_(std::move(mul)), unit_(unit) {
        const std::size_t n = names_.size();
        if (n == 0) throw MalformedInput("group has no elements");
        if (mul_.size() != n) throw MalformedInput("multiplication table has the wrong size");
        for (std::size_t i = 0; i < n; ++i) {
            if (!index_.emplace(names_[i], static_cast<Index>(i)).second)
                throw MalformedInput("duplicate group element '" + names_[i] + "'");
            if (mul_[i].size() != n) throw MalformedInput("multiplication table has the wrong size");
            for (Index v : mul_[i])
                if (v >= n) throw MalformedInput("multiplication table entry out of range");
        }
        if (unit_ >= n) throw MalformedInput("unit out of range");
        for (Index a = 0; a < n; ++a)
            if (mul_[unit_][a] != a || mul_[a][unit_] != a)
                throw ModelError("'" + names_[unit_] + "' is not a two-sided unit at '" + names_[a] + "'");
        for (Index a = 0; a < n; ++a)
            for (Index b = 0; b < n; ++b)
                for (Index c = 0; c < n; ++c)
                    if (mul_[mul_[a][b]][c] != mul_[a][mul_[b][c]])
                        throw ModelError("associativity fails at (" + names_[a] + ", " + names_[b] + ", " + names_[c] + ")");
        inverse_.assign(n, UINT32_MAX);
        for (Index a = 0; a < n; ++a)
            for (Index b = 0; b < n; ++b)
                if (mul_[a][b] == unit_ && mul_[b][a] == unit_) inverse_[a] = b;
        for (Index a = 0; a < n; ++a)
            if (inverse_[a] == UINT32_MAX) throw ModelError("'" + names_[a] + "' has no inverse");
    }

    static FiniteGroup trivial() { return FiniteGroup(); }

    /// Z/n with elements "0".."n-1".
    static FiniteGroup cyclic(std::size_t n) {
        if (n == 0) throw MalformedInput("cyclic group order must be positive");
        std::vector<std::string> names;
        std::vector<std::vector<Index>> mul(n, std::vector<Index>(n));
        for (std::size_t a = 0; a < n; ++a) {
            names.push_back(std::to_string(a));
            for (std::size_t b = 0; b < n; ++b) mul[a][b] = static_cast<Index>((a + b) % n);
        }
        return FiniteGroup(std::move(names), std::move(mul), 0);
    }

    /// S_n as permutations in one-line notation; (p·q)(i) = p(q(i)).
    static FiniteGroup symmetric(std::size_t n) {
        if (n == 0 || n > 6) throw MalformedInput("symmetric group degree must be between 1 and 6");
        std::vector<std::vector<std::size_t>> perms;
        std::vector<std::size_t> p(n);
        std::iota(p.begin(), p.end(), 0);
        do perms.push_back(p);
        while (std::next_permutation(p.begin(), p.end()));
        std::map<std::vector<std::size_t>, Index> index;
        std::vector<std::string> names;
        for (std::size_t i = 0; i < perms.size(); ++i) {
            index[perms[i]] = static_cast<Index>(i);
            std::string s;
            for (auto v : perms[i]) s += std::to_string(v + 1);
            names.push_back(s);
        }
        std::vector<std::vector<Index>> mul(perms.size(), std::vector<Index>(perms.size()));
        for (std::size_t a = 0; a < perms.size(); ++a)
            for (std::size_t b = 0; b < perms.size(); ++b) {
                std::vector<std::size_t> c(n);
                for (std::size_t i = 0; i < n; ++i) c[i] = perms[a][perms[b][i]];
                mul[a][b] = index.at(c);
            }
        return FiniteGroup(std::move(names), std::move(mul), 0);
    }

    static FiniteGroup product(const FiniteGroup& g, const FiniteGroup& h) {
        std::vector<std::string> names;
        const std::size_t n = g.order(), m = h.order();
        for (Index a = 0; a < n; ++a)
            for (Index b = 0; b < m; ++b) names.push_back("(" + g.name(a) + "," + h.name(b) + ")");
        std::vector<std::vector<Index>> mul(n * m, std::vector<Index>(n * m));
        for (Index x = 0; x < n * m; ++x)
            for (Index y = 0; y < n * m; ++y)
                mul[x][y] = static_cast<Index>(g.mul(x / m, y / m) * m + h.mul(x % m, y % m));
        return FiniteGroup(std::move(names), std::move(mul), static_cast<Index>(g.unit() * m + h.unit()));
    }

    std::size_t order() const { return names_.size(); }
    Index unit() const { return unit_; }
    Index mul(Index a, Index b) const { return mul_[a][b]; }
    Index inverse(Index a) const { return inverse_[a]; }
    const std::string& name(Index a) const { return names_[a]; }
    const std::vector<std::string>& names() const { return names_; }

    Index index_of(const std::string& s) const {
        auto it = index_.find(s);
        if (it == index_.end()) throw MalformedInput("unknown group element '" + s + "'");
        return it->second;
    }

    bool is_abelian() const {
        for (Index a = 0; a < order(); ++a)
            for (Index b = 0; b < order(); ++b)
                if (mul_[a][b] != mul_[b][a]) return false;
        return true;
    }

    /// G / [G, G] in invariant-factor form: Z^G modulo e_a + e_b - e_{ab}.
    FgAbGroup abelianization() const {
        const std::size_t n = order();
        IntMatrix rel(n, n * n);
        for (Index a = 0; a < n; ++a)
            for (Index b = 0; b < n; ++b) {
                std::size_t c = a * n + b;
                rel.add_to(a, c, 1);
                rel.add_to(b, c, 1);
                rel.add_to(mul_[a][b], c, -1);
            }
        auto inv = smith_invariants(rel);
        std::vector<Integer> orders(inv.begin(), inv.end());
        for (std::size_t i = inv.size(); i < n; ++i) orders.emplace_back(0);
        return FgAbGroup::from_cyclic_orders(orders);
    }

    /// The one-object groupoid; arrow a is the element a and g ∘ f = g·f.
    FinCategory as_category() const {
        std::vector<FinCategory::Arrow> arrows;
        for (Index a = 0; a < order(); ++a) arrows.push_back({names_[a], 0, 0});
        auto table = std::make_shared<std::vector<std::vector<Index>>>(mul_);
        return FinCategory({"*"}, std::move(arrows), {unit_},
                           [table](Index g, Index f) { return (*table)[g][f]; });
    }

private:
    std::vector<std::string> names_;
    std::vector<std::vector<Index>> mul_;
    Index unit_ = 0;
    std::vector<Index> inverse_;
    std::map<std::string, Index> index_;
};

}  // namespace diffcech
