/**
 * Finite categories given by object/morphism lists and a composition
 * function, and their nerves truncated at a chosen degree.
 *
 * A k-simplex of the nerve is a chain (a_1, ..., a_k) of composable arrows
 * with target(a_i) = source(a_{i+1}); vertex 0 is source(a_1). Faces:
 * d_0 drops a_1, d_k drops a_k, and 0 < i < k replaces a_i, a_{i+1} by the
 * composite a_{i+1} ∘ a_i. The degeneracy s_i inserts an identity at vertex i.
 */
#pragma once

#include <functional>
#include <memory>
#include <sstream>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "errors.hpp"
#include "simplicial_set.hpp"

namespace diffcech {

class FinCategory {
public:
    /// compose(g, f) = g ∘ f, called only when target(f) = source(g).
    using Composer = std::function<Index(Index g, Index f)>;

    struct Arrow {
        std::string name;
        Index source = 0;
        Index target = 0;
    };

    FinCategory() = default;

    FinCategory(std::vector<std::string> objects, std::vector<Arrow> arrows, std::vector<Index> identities,
                Composer compose)
        : objects_(std::move(objects)), arrows_(std::move(arrows)), identity_(std::move(identities)),
          compose_(std::move(compose)) {
        if (identity_.size() != objects_.size()) throw MalformedInput("category: one identity per object required");
        out_.assign(objects_.size(), {});
        position_.resize(arrows_.size());
        for (Index a = 0; a < arrows_.size(); ++a) {
            if (arrows_[a].source >= objects_.size() || arrows_[a].target >= objects_.size())
                throw MalformedInput("category: arrow endpoint out of range");
            position_[a] = static_cast<Index>(out_[arrows_[a].source].size());
            out_[arrows_[a].source].push_back(a);
        }
    }

    /// Builds a category from an explicit table of composites keyed by (g, f).
    static FinCategory from_table(std::vector<std::string> objects, std::vector<Arrow> arrows,
                                  std::vector<Index> identities,
                                  const std::vector<std::tuple<Index, Index, Index>>& table) {
        auto map = std::make_shared<std::unordered_map<std::uint64_t, Index>>();
        for (auto [g, f, gf] : table) (*map)[key(g, f)] = gf;
        auto ids = std::make_shared<std::vector<Index>>(identities);
        auto arr = std::make_shared<std::vector<Arrow>>(arrows);
        Composer c = [map, ids, arr](Index g, Index f) -> Index {
            if ((*ids)[(*arr)[g].source] == g) return f;
            if ((*ids)[(*arr)[f].target] == f) return g;
            auto it = map->find(key(g, f));
            if (it == map->end()) throw ModelError("category: composite of '" + (*arr)[g].name + "' and '" +
                                                   (*arr)[f].name + "' is missing from the table");
            return it->second;
        };
        return FinCategory(std::move(objects), std::move(arrows), std::move(identities), std::move(c));
    }

    std::size_t object_count() const { return objects_.size(); }
    std::size_t arrow_count() const { return arrows_.size(); }
    const std::string& object_name(Index o) const { return objects_[o]; }
    const Arrow& arrow(Index a) const { return arrows_[a]; }
    Index source(Index a) const { return arrows_[a].source; }
    Index target(Index a) const { return arrows_[a].target; }
    Index identity(Index o) const { return identity_[o]; }
    bool is_identity(Index a) const { return identity_[arrows_[a].source] == a; }
    const std::vector<Index>& out_arrows(Index o) const { return out_[o]; }
    Index out_position(Index a) const { return position_[a]; }

    Index compose(Index g, Index f) const {
        if (target(f) != source(g)) throw ModelError("category: composing non-composable arrows");
        return compose_(g, f);
    }

private:
    static std::uint64_t key(Index g, Index f) { return (std::uint64_t(g) << 32) | f; }

    std::vector<std::string> objects_;
    std::vector<Arrow> arrows_;
    std::vector<Index> identity_;
    Composer compose_;
    std::vector<std::vector<Index>> out_;
    std::vector<Index> position_;
};

/// Identity, endpoint and associativity laws; associativity is checked on at most `triple_cap` triples.
inline std::vector<std::string> verify_category_laws(const FinCategory& c, std::size_t triple_cap = 2000000,
                                                     bool groupoid = false) {
    std::vector<std::string> out;
    for (Index o = 0; o < c.object_count(); ++o) {
        Index id = c.identity(o);
        if (c.source(id) != o || c.target(id) != o) out.push_back("identity of '" + c.object_name(o) + "' is not an endomorphism");
    }
    if (!out.empty()) return out;
    std::size_t triples = 0;
    for (Index f = 0; f < c.arrow_count(); ++f) {
        const auto& af = c.arrow(f);
        if (c.compose(c.identity(af.target), f) != f || c.compose(f, c.identity(af.source)) != f) {
            out.push_back("identity law fails at '" + af.name + "'");
            continue;
        }
        bool has_inverse = !groupoid;
        for (Index g : c.out_arrows(af.target)) {
            Index gf = c.compose(g, f);
            if (c.source(gf) != af.source || c.target(gf) != c.target(g)) {
                out.push_back("composite '" + c.arrow(g).name + "∘" + af.name + "' has wrong endpoints");
                continue;
            }
            if (!has_inverse && gf == c.identity(af.source) && c.compose(f, g) == c.identity(af.target))
                has_inverse = true;
            for (Index h : c.out_arrows(c.target(g))) {
                if (++triples > triple_cap) break;
                if (c.compose(h, gf) != c.compose(c.compose(h, g), f))
                    out.push_back("associativity fails at ('" + c.arrow(h).name + "', '" + c.arrow(g).name + "', '" +
                                  af.name + "')");
            }
        }
        if (!has_inverse) out.push_back("arrow '" + af.name + "' has no inverse");
    }
    return out;
}

/// Composable chains of a category indexed degree by degree, with O(k) lookup.
class ChainIndex {
public:
    ChainIndex(const FinCategory& c, std::size_t n_max, std::size_t cap = 10000000)
        : ChainIndex(std::make_shared<const FinCategory>(c), n_max, cap) {}

    ChainIndex(std::shared_ptr<const FinCategory> cat, std::size_t n_max, std::size_t cap = 10000000)
        : cat_(std::move(cat)), arrows_(n_max + 1), last_(n_max + 1), ext_offset_(n_max + 1) {
        const FinCategory& c = *cat_;
        last_[0].resize(c.object_count());
        for (Index o = 0; o < c.object_count(); ++o) last_[0][o] = o;
        for (std::size_t k = 1; k <= n_max; ++k) {
            const std::size_t prev = last_[k - 1].size();
            auto& off = ext_offset_[k - 1];
            off.resize(prev + 1);
            std::size_t total = 0;
            for (std::size_t x = 0; x < prev; ++x) {
                off[x] = total;
                total += c.out_arrows(last_[k - 1][x]).size();
            }
            off[prev] = total;
            if (total > cap)
                throw ResourceLimit("nerve degree " + std::to_string(k) + " has " + std::to_string(total) +
                                    " chains, over the cap of " + std::to_string(cap));
            arrows_[k].reserve(total * k);
            last_[k].reserve(total);
            for (std::size_t x = 0; x < prev; ++x)
                for (Index a : c.out_arrows(last_[k - 1][x])) {
                    arrows_[k].insert(arrows_[k].end(), arrows_[k - 1].begin() + x * (k - 1),
                                      arrows_[k - 1].begin() + (x + 1) * (k - 1));
                    arrows_[k].push_back(a);
                    last_[k].push_back(c.target(a));
                }
        }
    }

    const FinCategory& category() const { return *cat_; }
    std::size_t n_max() const { return last_.size() - 1; }
    std::size_t count(std::size_t k) const { return last_[k].size(); }

    /// Arrow a_{j+1} of chain x (0-based j).
    Index arrow(std::size_t k, Index x, std::size_t j) const { return arrows_[k][x * k + j]; }

    Index vertex(std::size_t k, Index x, std::size_t j) const {
        if (j == 0) return k == 0 ? x : cat_->source(arrow(k, x, 0));
        return cat_->target(arrow(k, x, j - 1));
    }

    Index lookup(Index start, const std::vector<Index>& chain) const {
        Index idx = start;
        for (std::size_t t = 0; t < chain.size(); ++t)
            idx = static_cast<Index>(ext_offset_[t][idx] + cat_->out_position(chain[t]));
        return idx;
    }

    Index face(std::size_t k, Index x, std::size_t i) const {
        if (k == 1) return i == 0 ? cat_->target(arrow(1, x, 0)) : cat_->source(arrow(1, x, 0));
        std::vector<Index> ch;
        ch.reserve(k - 1);
        Index start = vertex(k, x, 0);
        if (i == 0) {
            start = vertex(k, x, 1);
            for (std::size_t j = 1; j < k; ++j) ch.push_back(arrow(k, x, j));
        } else if (i == k) {
            for (std::size_t j = 0; j + 1 < k; ++j) ch.push_back(arrow(k, x, j));
        } else {
            for (std::size_t j = 0; j < k; ++j) {
                if (j == i - 1) {
                    ch.push_back(cat_->compose(arrow(k, x, i), arrow(k, x, i - 1)));
                    ++j;
                } else {
                    ch.push_back(arrow(k, x, j));
                }
            }
        }
        return lookup(start, ch);
    }

    Index degeneracy(std::size_t k, Index x, std::size_t i) const {
        std::vector<Index> ch;
        ch.reserve(k + 1);
        for (std::size_t j = 0; j < i; ++j) ch.push_back(arrow(k, x, j));
        ch.push_back(cat_->identity(vertex(k, x, i)));
        for (std::size_t j = i; j < k; ++j) ch.push_back(arrow(k, x, j));
        return lookup(vertex(k, x, 0), ch);
    }

    std::string describe(std::size_t k, Index x) const {
        if (k == 0) return "(" + cat_->object_name(x) + ")";
        std::ostringstream os;
        os << "(";
        for (std::size_t j = 0; j < k; ++j) os << (j ? ", " : "") << cat_->arrow(arrow(k, x, j)).name;
        os << ")";
        return os.str();
    }

private:
    std::shared_ptr<const FinCategory> cat_;
    std::vector<std::vector<Index>> arrows_;
    std::vector<std::vector<Index>> last_;
    std::vector<std::vector<std::size_t>> ext_offset_;
};

/// Nerve truncated at n_max; each simplex is its own component.
inline TruncatedSimplicialSet nerve(const FinCategory& c, std::size_t n_max, std::size_t cap = 10000000) {
    auto chains = std::make_shared<ChainIndex>(c, n_max, cap);
    TruncatedSimplicialSet x(n_max);
    for (std::size_t k = 0; k <= n_max; ++k) {
        const std::size_t n = chains->count(k);
        x.set_count(k, n);
        for (std::size_t i = 0; k > 0 && i <= k; ++i) {
            auto& f = x.face_map(k, i);
            f.resize(n);
            for (Index s = 0; s < n; ++s) f[s] = chains->face(k, s, i);
        }
        for (std::size_t i = 0; k < n_max && i <= k; ++i) {
            auto& f = x.degeneracy_map(k, i);
            f.resize(n);
            for (Index s = 0; s < n; ++s) f[s] = chains->degeneracy(k, s, i);
        }
    }
    x.set_describer([chains](std::size_t k, Index s) { return chains->describe(k, s); });
    return x;
}

}  // namespace diffcech
