#pragma once

#include "hierlab/calculus.hpp"

#include <json.hpp>

#include <sstream>
#include <string>

namespace hierlab {

using ordered_json = nlohmann::ordered_json;

// Fixed field order (alphabet, params, terms / coeff, monomial) and string
// rationals "num/den" give bit-exact round trips.
inline ordered_json poly_to_json(const DiffPoly& p) {
    ordered_json j;
    j["alphabet"] = ordered_json::array();
    for (VarId v : p.alphabet()) j["alphabet"].push_back(var_name(v));
    j["params"] = {kParamNames[0], kParamNames[1]};
    j["terms"] = ordered_json::array();
    for (const auto& [m, c] : p.terms()) {
        ordered_json jt;
        jt["coeff"] = ordered_json::array();
        for (const auto& [e, g] : c.terms()) {
            ordered_json jc;
            jc["exp"] = {e[0], e[1]};
            jc["re"] = to_string(g.re);
            jc["im"] = to_string(g.im);
            jt["coeff"].push_back(std::move(jc));
        }
        jt["monomial"] = ordered_json::array();
        for (const auto& f : m) jt["monomial"].push_back({var_name(f.var), f.order, f.power});
        j["terms"].push_back(std::move(jt));
    }
    return j;
}

inline DiffPoly poly_from_json(const ordered_json& j) {
    DiffPoly p;
    for (const auto& jt : j.at("terms")) {
        Monomial m;
        for (const auto& jf : jt.at("monomial"))
            m.push_back({var(jf.at(0).get<std::string>()), jf.at(1).get<int>(), jf.at(2).get<int>()});
        std::sort(m.begin(), m.end(), [](const VarFactor& a, const VarFactor& b) {
            return std::tie(a.var, a.order) < std::tie(b.var, b.order);
        });
        Coeff c;
        for (const auto& jc : jt.at("coeff")) {
            ParamExp e{jc.at("exp").at(0).get<int>(), jc.at("exp").at(1).get<int>()};
            c.add(e, GaussianRational(rational_from_string(jc.at("re").get<std::string>()),
                                      rational_from_string(jc.at("im").get<std::string>())));
        }
        p.add(std::move(m), c);
    }
    return p;
}

namespace detail {

inline std::string superscript(int n) {
    static const char* digits[10] = {"⁰", "¹", "²", "³", "⁴",
                                     "⁵", "⁶", "⁷", "⁸", "⁹"};
    std::string s = std::to_string(n), out;
    for (char ch : s) out += digits[ch - '0'];
    return out;
}

inline std::string pretty_var(VarId v) {
    std::string n = var_name(v);
    if (n == "qbar") return "q̄";
    return n;
}

inline std::string pretty_factor(const VarFactor& f) {
    static const char* primes[5] = {"", "′", "″", "‴", "⁗"};
    std::string s = pretty_var(f.var);
    if (f.order > 0 && f.order <= 4)
        s += primes[f.order];
    else if (f.order > 4)
        s += "^(" + std::to_string(f.order) + ")";
    if (f.power > 1) s += superscript(f.power);
    return s;
}

// "1", "-1", "i", "3/2", "2 i tau^2" ... sign pulled out by the caller
inline std::string pretty_gauss_mag(const GaussianRational& g) {
    // expects g with a definite "display sign" already applied
    if (g.im == 0) return to_string(g.re);
    if (g.re == 0) {
        if (g.im == 1) return "i";
        if (g.im == -1) return "-i";
        return to_string(g.im) + " i";
    }
    return "(" + to_string(g) + ")";
}

}  // namespace detail

// Appendix-style rendering, e.g. "i q'' - 2 i q^2 r" (with unicode primes).
inline std::string pretty(const DiffPoly& p) {
    if (p.is_zero()) return "0";
    // order terms: descending peel order (derivative-heavy terms first)
    std::vector<const std::pair<const Monomial, Coeff>*> terms;
    for (const auto& t : p.terms()) terms.push_back(&t);
    std::sort(terms.begin(), terms.end(), [](auto* a, auto* b) {
        return detail::mono_peel_less(b->first, a->first);
    });

    std::string out;
    bool first = true;
    for (auto* t : terms) {
        const auto& [m, c] = *t;
        for (const auto& [e, g] : c.terms()) {
            // decide a display sign: negate if re<0, or re==0 and im<0
            bool neg = (g.re < 0) || (g.re == 0 && g.im < 0);
            GaussianRational mag = neg ? -g : g;
            std::string coeff = detail::pretty_gauss_mag(mag);
            std::string body;
            auto append = [&body](const std::string& s) {
                if (!body.empty()) body += " ";
                body += s;
            };
            if (e[0] == 1) append("τ");
            if (e[0] > 1) append("τ" + detail::superscript(e[0]));
            if (e[1] == 1) append("τ₀");
            if (e[1] > 1) append("τ₀" + detail::superscript(e[1]));
            for (const auto& f : m) append(detail::pretty_factor(f));
            std::string piece;
            if (body.empty())
                piece = coeff;
            else if (coeff == "1")
                piece = body;
            else
                piece = coeff + " " + body;
            if (first) {
                out += (neg ? "-" : "") + piece;
                first = false;
            } else {
                out += (neg ? " - " : " + ") + piece;
            }
        }
    }
    return out;
}

}  // namespace hierlab
