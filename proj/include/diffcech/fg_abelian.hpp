/**
 * Finitely generated abelian groups in invariant-factor normal form.
 */
#pragma once

#include <algorithm>
#include <cctype>
#include <sstream>
#include <string>
#include <vector>

#include "smith.hpp"

namespace diffcech {

class FgAbGroup {
public:
    FgAbGroup() = default;

    /// Normalizes arbitrary cyclic orders (0 meaning Z, 1 meaning trivial).
    static FgAbGroup from_cyclic_orders(const std::vector<Integer>& orders) {
        FgAbGroup g;
        std::vector<Integer> finite;
        for (const auto& o : orders) {
            if (o < 0) throw MalformedInput("negative cyclic order");
            if (o == 0)
                ++g.free_rank_;
            else if (o > 1)
                finite.push_back(o);
        }
        if (!finite.empty()) {
            IntMatrix diag(finite.size(), finite.size());
            for (std::size_t i = 0; i < finite.size(); ++i) diag.push_back_entry(i, i, finite[i]);
            for (auto& d : smith_invariants(diag))
                if (d > 1) g.torsion_.push_back(d);
        }
        return g;
    }

    static FgAbGroup integers(std::size_t rank = 1) {
        FgAbGroup g;
        g.free_rank_ = rank;
        return g;
    }

    static FgAbGroup cyclic(const Integer& n) { return from_cyclic_orders({n}); }

    static FgAbGroup trivial() { return {}; }

    /// Parses "0", "Z", "Z^3", "Z/4", "Z+Z/2", "Z/2 ⊕ Z/2", "(Z/2)^3".
    static FgAbGroup parse(const std::string& text) {
        std::string s;
        for (std::size_t i = 0; i < text.size(); ++i) {
            unsigned char ch = static_cast<unsigned char>(text[i]);
            if (std::isspace(ch)) continue;
            if (text.compare(i, 3, "\xE2\x8A\x95") == 0) {  // ⊕
                s += '+';
                i += 2;
                continue;
            }
            s += static_cast<char>(ch);
        }
        if (s.empty()) throw MalformedInput("empty group expression");
        std::vector<Integer> orders;
        std::size_t pos = 0;
        while (pos <= s.size()) {
            std::size_t end = s.find('+', pos);
            std::string term = s.substr(pos, end == std::string::npos ? std::string::npos : end - pos);
            parse_term(term, orders);
            if (end == std::string::npos) break;
            pos = end + 1;
        }
        return from_cyclic_orders(orders);
    }

    std::size_t free_rank() const { return free_rank_; }
    const std::vector<Integer>& torsion() const { return torsion_; }

    bool is_trivial() const { return free_rank_ == 0 && torsion_.empty(); }
    bool is_free() const { return torsion_.empty(); }

    /// Cyclic summands: one 0 per free rank followed by the torsion factors.
    std::vector<Integer> cyclic_summands() const {
        std::vector<Integer> out(free_rank_, Integer(0));
        out.insert(out.end(), torsion_.begin(), torsion_.end());
        return out;
    }

    /// Group order; 0 encodes "infinite".
    Integer order() const {
        if (free_rank_ > 0) return 0;
        Integer n = 1;
        for (const auto& d : torsion_) n *= d;
        return n;
    }

    friend FgAbGroup direct_sum(const FgAbGroup& a, const FgAbGroup& b) {
        auto o = a.cyclic_summands();
        auto ob = b.cyclic_summands();
        o.insert(o.end(), ob.begin(), ob.end());
        return from_cyclic_orders(o);
    }

    friend bool operator==(const FgAbGroup&, const FgAbGroup&) = default;

    std::string to_string() const {
        if (is_trivial()) return "0";
        std::ostringstream os;
        bool first = true;
        if (free_rank_ > 0) {
            os << "Z";
            if (free_rank_ > 1) os << "^" << free_rank_;
            first = false;
        }
        std::size_t i = 0;
        while (i < torsion_.size()) {
            std::size_t j = i;
            while (j < torsion_.size() && torsion_[j] == torsion_[i]) ++j;
            if (!first) os << " + ";
            first = false;
            if (j - i > 1)
                os << "(Z/" << torsion_[i] << ")^" << (j - i);
            else
                os << "Z/" << torsion_[i];
            i = j;
        }
        return os.str();
    }

private:
    static void parse_term(const std::string& term, std::vector<Integer>& orders) {
        if (term.empty()) throw MalformedInput("empty summand in group expression");
        std::string base = term;
        std::size_t power = 1;
        auto caret = term.rfind('^');
        if (caret != std::string::npos) {
            base = term.substr(0, caret);
            power = parse_count(term.substr(caret + 1));
        }
        if (base.size() >= 2 && base.front() == '(' && base.back() == ')') base = base.substr(1, base.size() - 2);
        Integer order;
        if (base == "0") {
            order = 1;
        } else if (base == "Z") {
            order = 0;
        } else if (base.rfind("Z/", 0) == 0) {
            order = parse_count(base.substr(2));
            if (order == 0) throw MalformedInput("Z/0 is not allowed; write Z");
        } else {
            throw MalformedInput("unrecognized group summand '" + term + "'");
        }
        for (std::size_t k = 0; k < power; ++k) orders.push_back(order);
    }

    static std::size_t parse_count(const std::string& s) {
        if (s.empty() || !std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); }))
            throw MalformedInput("expected a non-negative integer, got '" + s + "'");
        return static_cast<std::size_t>(std::stoull(s));
    }

    std::size_t free_rank_ = 0;
    std::vector<Integer> torsion_;
};

/// A^c: each cyclic summand of A repeated c times.
inline FgAbGroup functions_group(std::size_t components, const FgAbGroup& a) {
    std::vector<Integer> o;
    for (std::size_t i = 0; i < components; ++i) {
        auto s = a.cyclic_summands();
        o.insert(o.end(), s.begin(), s.end());
    }
    return FgAbGroup::from_cyclic_orders(o);
}

}  // namespace diffcech
