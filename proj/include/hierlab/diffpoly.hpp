#pragma once

#include "hierlab/coeff.hpp"
#include "hierlab/symbols.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <vector>

namespace hierlab {

struct UnsupportedAlphabet : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One (variable, derivative order, power) factor. s never carries a
// derivative order; ds is expanded to -s^2 v' on the spot.
struct VarFactor {
    VarId var;
    int order;
    int power;

    friend bool operator==(const VarFactor& a, const VarFactor& b) {
        return a.var == b.var && a.order == b.order && a.power == b.power;
    }
    friend auto operator<=>(const VarFactor& a, const VarFactor& b) = default;
};

// Sorted by (var, order); no duplicate (var, order) keys; powers >= 1.
using Monomial = std::vector<VarFactor>;

inline Monomial mono(std::initializer_list<VarFactor> fs) {
    Monomial m(fs);
    std::sort(m.begin(), m.end(), [](const VarFactor& a, const VarFactor& b) {
        return std::tie(a.var, a.order) < std::tie(b.var, b.order);
    });
    return m;
}

inline Monomial mono_mul(const Monomial& a, const Monomial& b) {
    Monomial r;
    r.reserve(a.size() + b.size());
    auto ia = a.begin(), ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        auto ka = std::tie(ia->var, ia->order), kb = std::tie(ib->var, ib->order);
        if (ka < kb)
            r.push_back(*ia++);
        else if (kb < ka)
            r.push_back(*ib++);
        else {
            r.push_back({ia->var, ia->order, ia->power + ib->power});
            ++ia, ++ib;
        }
    }
    r.insert(r.end(), ia, a.end());
    r.insert(r.end(), ib, b.end());
    return r;
}

// multiply by a single factor
inline Monomial mono_mul(const Monomial& a, const VarFactor& f) { return mono_mul(a, Monomial{f}); }

// divide by one power of (var, order); factor must be present
inline Monomial mono_div_once(const Monomial& a, VarId v, int order) {
    Monomial r;
    r.reserve(a.size());
    bool found = false;
    for (const auto& f : a) {
        if (!found && f.var == v && f.order == order) {
            found = true;
            if (f.power > 1) r.push_back({f.var, f.order, f.power - 1});
        } else {
            r.push_back(f);
        }
    }
    if (!found) throw std::logic_error("mono_div_once: factor not present");
    return r;
}

inline int mono_power_of(const Monomial& m, VarId v, int order) {
    for (const auto& f : m)
        if (f.var == v && f.order == order) return f.power;
    return 0;
}

// Exact multivariate differential polynomial over Q(i)[tau, tau0].
class DiffPoly {
public:
    using Terms = std::map<Monomial, Coeff>;

    DiffPoly() = default;
    DiffPoly(Coeff constant) {
        if (!constant.is_zero()) t_.emplace(Monomial{}, std::move(constant));
    }
    DiffPoly(long n) : DiffPoly(Coeff(n)) {}

    static DiffPoly term(Monomial m, Coeff c) {
        DiffPoly p;
        if (!c.is_zero()) p.t_.emplace(std::move(m), std::move(c));
        return p;
    }
    static DiffPoly variable(VarId v, int order = 0, int power = 1) {
        return term(Monomial{{v, order, power}}, Coeff(1));
    }

    bool is_zero() const { return t_.empty(); }
    const Terms& terms() const { return t_; }
    std::size_t size() const { return t_.size(); }

    Coeff constant_term() const {
        auto it = t_.find(Monomial{});
        return it == t_.end() ? Coeff() : it->second;
    }

    std::set<VarId> alphabet() const {
        std::set<VarId> a;
        for (const auto& [m, c] : t_)
            for (const auto& f : m) a.insert(f.var);
        return a;
    }
    bool contains_var(VarId v) const {
        for (const auto& [m, c] : t_)
            for (const auto& f : m)
                if (f.var == v) return true;
        return false;
    }
    int max_order(VarId v) const {
        int k = -1;
        for (const auto& [m, c] : t_)
            for (const auto& f : m)
                if (f.var == v) k = std::max(k, f.order);
        return k;
    }

    void add(Monomial m, const Coeff& c) {
        if (c.is_zero()) return;
        auto [it, inserted] = t_.try_emplace(std::move(m), c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) t_.erase(it);
        }
    }

    DiffPoly& operator+=(const DiffPoly& o) {
        for (const auto& [m, c] : o.t_) add(m, c);
        return *this;
    }
    DiffPoly& operator-=(const DiffPoly& o) {
        for (const auto& [m, c] : o.t_) add(m, -c);
        return *this;
    }
    friend DiffPoly operator+(DiffPoly a, const DiffPoly& b) { return a += b; }
    friend DiffPoly operator-(DiffPoly a, const DiffPoly& b) { return a -= b; }
    friend DiffPoly operator-(const DiffPoly& a) {
        DiffPoly r;
        for (const auto& [m, c] : a.t_) r.t_.emplace(m, -c);
        return r;
    }
    friend DiffPoly operator*(const DiffPoly& a, const DiffPoly& b) {
        DiffPoly r;
        for (const auto& [ma, ca] : a.t_)
            for (const auto& [mb, cb] : b.t_) r.add(mono_mul(ma, mb), ca * cb);
        return r;
    }
    DiffPoly& operator*=(const DiffPoly& o) { return *this = *this * o; }

    DiffPoly scaled(const Coeff& c) const {
        DiffPoly r;
        for (const auto& [m, v] : t_) r.add(m, v * c);
        return r;
    }
    DiffPoly scaled(const GaussianRational& c) const {
        DiffPoly r;
        for (const auto& [m, v] : t_) r.add(m, v.scaled(c));
        return r;
    }

    friend bool operator==(const DiffPoly& a, const DiffPoly& b) { return a.t_ == b.t_; }
    friend bool operator!=(const DiffPoly& a, const DiffPoly& b) { return !(a == b); }

private:
    Terms t_;
};

inline DiffPoly pow(const DiffPoly& p, int n) {
    DiffPoly r(1);
    for (int k = 0; k < n; ++k) r *= p;
    return r;
}

// d/dx of a single monomial via the Leibniz rule; ds = -s^2 v'.
inline DiffPoly x_derivative(const Monomial& m, const Coeff& c) {
    DiffPoly out;
    const VarId s = s_var();
    for (std::size_t j = 0; j < m.size(); ++j) {
        const VarFactor& f = m[j];
        Monomial rest;
        rest.reserve(m.size());
        for (std::size_t k = 0; k < m.size(); ++k) {
            if (k == j) {
                if (f.power > 1) rest.push_back({f.var, f.order, f.power - 1});
            } else {
                rest.push_back(m[k]);
            }
        }
        Coeff cc = c.scaled(GaussianRational(f.power));
        if (f.var == s) {
            // p * s^{p-1} * (-s^2 v') * rest
            Monomial r2 = mono_mul(rest, {s, 0, 2});
            r2 = mono_mul(r2, {s_companion(), 1, 1});
            out.add(std::move(r2), -cc);
        } else {
            out.add(mono_mul(rest, {f.var, f.order + 1, 1}), cc);
        }
    }
    return out;
}

inline DiffPoly x_derivative(const DiffPoly& p) {
    DiffPoly out;
    for (const auto& [m, c] : p.terms()) out += x_derivative(m, c);
    return out;
}

inline DiffPoly x_derivative(const DiffPoly& p, int times) {
    DiffPoly r = p;
    for (int k = 0; k < times; ++k) r = x_derivative(r);
    return r;
}

// Substitution var -> polynomial, respecting derivatives via the chain rule:
// u^{(k)} is replaced by d^k/dx^k of the replacement.
inline DiffPoly substitute(const DiffPoly& p, const std::map<VarId, DiffPoly>& map) {
    // cache derivatives of the replacements
    std::map<VarId, std::vector<DiffPoly>> ders;
    for (const auto& [v, repl] : map) ders[v] = {repl};
    auto repl_der = [&](VarId v, int order) -> const DiffPoly& {
        auto& vec = ders.at(v);
        while (static_cast<int>(vec.size()) <= order) vec.push_back(x_derivative(vec.back()));
        return vec[order];
    };

    DiffPoly out;
    for (const auto& [m, c] : p.terms()) {
        DiffPoly acc = DiffPoly::term(Monomial{}, c);
        for (const auto& f : m) {
            if (map.count(f.var)) {
                const DiffPoly& r = repl_der(f.var, f.order);
                for (int k = 0; k < f.power; ++k) acc *= r;
            } else {
                acc *= DiffPoly::variable(f.var, f.order, f.power);
            }
        }
        out += acc;
    }
    return out;
}

// Per Def of differential-polynomial gradings. For monomials containing s the
// KdV/Gardner degrees are not defined; s_power is reported separately.
struct Grading {
    int homogeneity = 0;      // factor count, s excluded
    int weight = 0;           // total derivative count
    Rational degree_kdv{0};   // H + M/2
    int degree_gardner = 0;   // H + M
    int s_power = 0;
};

inline Grading grading(const Monomial& m) {
    Grading g;
    const VarId s = s_var();
    for (const auto& f : m) {
        if (f.var == s) {
            g.s_power += f.power;
            continue;
        }
        g.homogeneity += f.power;
        g.weight += f.order * f.power;
    }
    g.degree_kdv = Rational(2 * g.homogeneity + g.weight, 2);
    g.degree_gardner = g.homogeneity + g.weight;
    return g;
}

inline std::vector<std::pair<Monomial, Grading>> grading(const DiffPoly& p) {
    std::vector<std::pair<Monomial, Grading>> out;
    out.reserve(p.size());
    for (const auto& [m, c] : p.terms()) out.emplace_back(m, grading(m));
    return out;
}

}  // namespace hierlab
