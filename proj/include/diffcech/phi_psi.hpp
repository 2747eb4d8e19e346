/**
 * Degreewise comparison of QX with B//M through the two candidate maps
 *
 *   phi_k (v; f_1, ..., f_k) = (v; F_1, ..., F_k),  F_j = ⊔ of every map found in position j
 *   psi_k (b; m_1, ..., m_k) = (b; m_1|U_0, m_2|U_1, ...),  U_j the probe hit by the previous restriction
 *
 * phi_k only exists when, for every probe, the maps occurring in position j
 * with that probe as source agree, and psi_k only where each restriction is a
 * map of the presentation. Both are evaluated exhaustively, and the report
 * says where they fail to be defined or to be mutually inverse.
 */
#pragma once

#include <limits>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "site.hpp"

namespace diffcech {

struct PhiPsiDegree {
    std::size_t degree = 0;
    std::size_t qx_count = 0, qx_nondegenerate = 0;
    Integer bm_count = 0, bm_nondegenerate = 0;
    bool phi_defined = false;
    std::string phi_witness;
    bool psi_checked = false;            // B//M_k was small enough to enumerate
    std::size_t psi_undefined = 0;       // simplices of B//M_k where psi_k is not defined
    std::string psi_witness;
    std::optional<bool> psi_phi_identity;  // psi ∘ phi = id on QX_k
    std::optional<bool> phi_psi_identity;  // phi ∘ psi = id on B//M_k

    bool isomorphism() const { return phi_psi_identity.value_or(false) && psi_phi_identity.value_or(false); }
};

struct PhiPsiReport {
    std::size_t gauge_order = 0;
    std::vector<PhiPsiDegree> degrees;
    std::vector<std::string> caveats;
};

inline PhiPsiReport phi_psi_compare(const PlotPresentation& p, std::size_t n_max, std::size_t enum_cap = 1000000,
                                    std::size_t gauge_cap = GaugeMonoid::default_cap) {
    const Nebula n = nebula(p);
    const GaugeMonoid m = gauge_monoid(n, gauge_cap);
    const ChainIndex chains(p.category(), n_max);
    PhiPsiReport report;
    report.gauge_order = m.order();
    report.caveats.push_back("M carries the discrete structure: each gauge element is its own component");
    const std::size_t nb = n.graph.size(), nm = m.order();

    for (std::size_t k = 0; k <= n_max; ++k) {
        PhiPsiDegree d;
        d.degree = k;
        const std::size_t nchains = chains.count(k);
        std::vector<std::size_t> off(nchains + 1, 0);
        for (Index x = 0; x < nchains; ++x) {
            std::size_t size = p.probe(chains.vertex(k, x, 0)).graph.size();
            off[x + 1] = off[x] + size;
            bool degenerate = false;
            for (std::size_t j = 0; j < k; ++j) degenerate = degenerate || chains.category().is_identity(chains.arrow(k, x, j));
            if (!degenerate) d.qx_nondegenerate += size;
        }
        d.qx_count = off[nchains];
        Integer bm = nb, bm_nd = nb;
        for (std::size_t j = 0; j < k; ++j) bm *= nm, bm_nd *= (nm - 1);
        const bool bm_small = bm <= enum_cap;
        d.bm_count = bm;
        d.bm_nondegenerate = bm_nd;

        // phi: gather, per position and source probe, the maps that occur there.
        std::vector<Index> coproduct(k, 0);  // gauge element F_j when phi is defined
        d.phi_defined = true;
        for (std::size_t j = 0; j < k && d.phi_defined; ++j) {
            std::vector<std::set<Index>> seen(p.probes().size());
            for (Index x = 0; x < nchains; ++x) seen[p.map(chains.arrow(k, x, j)).from].insert(chains.arrow(k, x, j));
            std::vector<Index> f(nb);
            for (Index q = 0; q < seen.size() && d.phi_defined; ++q) {
                if (seen[q].size() != 1) {
                    d.phi_defined = false;
                    d.phi_witness = "position " + std::to_string(j + 1) + ": probe " + p.probe(q).id + " carries " +
                                    std::to_string(seen[q].size()) + " maps (";
                    std::size_t shown = 0;
                    for (Index a : seen[q]) d.phi_witness += (shown++ ? ", " : "") + p.map(a).id;
                    d.phi_witness += ")";
                    break;
                }
                const ProbeMap& pm = p.map(*seen[q].begin());
                for (Index v = 0; v < pm.vertex_map.size(); ++v) f[n.vertex(q, v)] = n.vertex(pm.to, pm.vertex_map[v]);
            }
            if (!d.phi_defined) break;
            auto e = m.find(f);
            if (!e) {
                d.phi_defined = false;
                d.phi_witness = "position " + std::to_string(j + 1) + ": the coproduct is not a gauge element";
            } else {
                coproduct[j] = *e;
            }
        }

        auto phi = [&](Index x, Index v) {
            std::size_t idx = 0;
            for (std::size_t j = k; j-- > 0;) idx = idx * nm + coproduct[j];
            return idx * nb + n.vertex(chains.vertex(k, x, 0), v);
        };
        // psi on the simplex with base vertex b and word w; nullopt where undefined.
        auto psi = [&](Index b, const std::vector<Index>& w, std::string* why) -> std::optional<std::size_t> {
            Index probe = n.probe_of[b];
            const Index start = probe;
            std::vector<Index> ch;
            for (std::size_t j = 0; j < k; ++j) {
                const Probe& src = p.probe(probe);
                Index hit = n.probe_of[m.act(w[j], n.vertex(probe, 0))];
                std::vector<Index> local(src.graph.size());
                for (Index v = 0; v < local.size(); ++v) {
                    Index img = m.act(w[j], n.vertex(probe, v));
                    if (n.probe_of[img] != hit) {
                        if (why) *why = m.name(w[j]) + " spreads probe " + src.id + " over several probes";
                        return std::nullopt;
                    }
                    local[v] = img - n.offset[hit];
                }
                auto a = p.find_map(probe, hit, local);
                if (!a) {
                    if (why) *why = m.name(w[j]) + " restricted to " + src.id + " is not a map of the presentation";
                    return std::nullopt;
                }
                ch.push_back(*a);
                probe = hit;
            }
            Index x = chains.lookup(start, ch);
            return off[x] + (b - n.offset[start]);
        };

        if (bm_small && d.qx_count <= enum_cap) {
            d.psi_checked = true;
            std::vector<Index> w(k);
            bool inverse_on_bm = true;
            for (std::size_t s = 0; s < static_cast<std::size_t>(bm); ++s) {
                Index b = static_cast<Index>(s % nb);
                std::size_t rest = s / nb;
                for (std::size_t j = 0; j < k; ++j, rest /= nm) w[j] = static_cast<Index>(rest % nm);
                std::string why;
                auto r = psi(b, w, d.psi_witness.empty() ? &why : nullptr);
                if (!r) {
                    ++d.psi_undefined;
                    if (d.psi_witness.empty()) d.psi_witness = why;
                    inverse_on_bm = false;
                    continue;
                }
                if (d.phi_defined) {
                    Index x = static_cast<Index>(std::upper_bound(off.begin(), off.end(), *r) - off.begin() - 1);
                    if (phi(x, static_cast<Index>(*r - off[x])) != s) inverse_on_bm = false;
                }
            }
            if (d.phi_defined) {
                d.phi_psi_identity = inverse_on_bm;
                bool inverse_on_qx = true;
                for (Index x = 0; x < nchains && inverse_on_qx; ++x)
                    for (Index v = 0; v < off[x + 1] - off[x]; ++v) {
                        std::size_t s = phi(x, v);
                        std::size_t rest = s / nb;
                        for (std::size_t j = 0; j < k; ++j, rest /= nm) w[j] = static_cast<Index>(rest % nm);
                        auto r = psi(static_cast<Index>(s % nb), w, nullptr);
                        if (!r || *r != off[x] + v) {
                            inverse_on_qx = false;
                            break;
                        }
                    }
                d.psi_phi_identity = inverse_on_qx;
            }
        }
        report.degrees.push_back(std::move(d));
    }
    return report;
}

namespace detail {

/// JSON number when it fits in 64 bits, decimal string otherwise.
inline nlohmann::ordered_json integer_json(const Integer& v) {
    if (v >= 0 && v <= std::numeric_limits<std::uint64_t>::max()) return static_cast<std::uint64_t>(v);
    if (v < 0 && v >= std::numeric_limits<std::int64_t>::min()) return static_cast<std::int64_t>(v);
    return v.str();
}

}  // namespace detail

inline nlohmann::ordered_json phi_psi_to_json(const PhiPsiReport& r) {
    nlohmann::ordered_json j;
    j["report"] = "phi_psi";
    j["gauge_order"] = r.gauge_order;
    j["degrees"] = nlohmann::ordered_json::array();
    for (const auto& d : r.degrees) {
        nlohmann::ordered_json dj;
        dj["degree"] = d.degree;
        dj["qx_count"] = d.qx_count;
        dj["qx_nondegenerate"] = d.qx_nondegenerate;
        dj["bm_count"] = detail::integer_json(d.bm_count);
        dj["bm_nondegenerate"] = detail::integer_json(d.bm_nondegenerate);
        dj["phi_defined"] = d.phi_defined;
        dj["phi_witness"] = d.phi_witness;
        dj["psi_checked"] = d.psi_checked;
        dj["psi_undefined"] = d.psi_undefined;
        dj["psi_witness"] = d.psi_witness;
        dj["psi_phi_identity"] = d.psi_phi_identity ? nlohmann::ordered_json(*d.psi_phi_identity) : nullptr;
        dj["phi_psi_identity"] = d.phi_psi_identity ? nlohmann::ordered_json(*d.phi_psi_identity) : nullptr;
        dj["isomorphism"] = d.isomorphism();
        j["degrees"].push_back(std::move(dj));
    }
    j["caveats"] = r.caveats;
    return j;
}

}  // namespace diffcech
