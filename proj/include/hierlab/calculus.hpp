#pragma once

#include "hierlab/diffpoly.hpp"

#include <optional>

namespace hierlab {

struct NotATotalDerivative : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NotAGradient : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline void require_no_s(const DiffPoly& p, const char* op) {
    if (p.contains_var(s_var()))
        throw UnsupportedAlphabet(std::string(op) + ": s-variable not supported here");
}

// Factor order used for leading-term selection: higher derivative order wins,
// ties go to the smaller VarId (derivatives are pushed onto later variables).
inline bool factor_less(const VarFactor& a, const VarFactor& b) {
    if (a.order != b.order) return a.order < b.order;
    if (a.var != b.var) return a.var > b.var;
    return a.power < b.power;
}

inline const VarFactor* max_factor(const Monomial& m) {
    const VarFactor* best = nullptr;
    for (const auto& f : m)
        if (!best || factor_less(*best, f)) best = &f;
    return best;
}

inline bool mono_peel_less(const Monomial& a, const Monomial& b) {
    // lexicographic over descending factor sequences
    Monomial da = a, db = b;
    auto gt = [](const VarFactor& x, const VarFactor& y) { return factor_less(y, x); };
    std::sort(da.begin(), da.end(), gt);
    std::sort(db.begin(), db.end(), gt);
    for (std::size_t i = 0; i < std::min(da.size(), db.size()); ++i) {
        if (factor_less(da[i], db[i])) return true;
        if (factor_less(db[i], da[i])) return false;
    }
    return da.size() < db.size();
}

// One integration-by-parts step on monomial m (coefficient c): subtracts an
// exact derivative so that m disappears, adding only strictly smaller
// monomials. Returns the peeled antiderivative piece, or nullopt if m cannot
// be peeled without creating larger terms.
inline std::optional<std::pair<Monomial, GaussianRational>> peel_candidate(const Monomial& m) {
    const VarFactor* f = max_factor(m);
    if (!f || f->order == 0) return std::nullopt;
    Monomial q = mono_mul(mono_div_once(m, f->var, f->order), {f->var, f->order - 1, 1});
    DiffPoly t = x_derivative(q, Coeff(1));
    GaussianRational lambda;
    for (const auto& [tm, tc] : t.terms()) {
        if (tm == m) {
            lambda = tc.constant_part();
            continue;
        }
        if (mono_peel_less(m, tm)) return std::nullopt;  // would grow
    }
    if (lambda.is_zero()) return std::nullopt;
    return std::make_pair(std::move(q), lambda);
}

}  // namespace detail

// partial derivative of p with respect to the jet coordinate var^{(order)}
inline DiffPoly jet_partial(const DiffPoly& p, VarId v, int order) {
    DiffPoly out;
    for (const auto& [m, c] : p.terms()) {
        int pw = mono_power_of(m, v, order);
        if (pw == 0) continue;
        out.add(mono_div_once(m, v, order), c.scaled(GaussianRational(pw)));
    }
    return out;
}

// Euler operator: sum_i (-d)^i (dp/dvar^{(i)})
inline DiffPoly variational_derivative(const DiffPoly& p, VarId v) {
    detail::require_no_s(p, "variational_derivative");
    DiffPoly out;
    int kmax = p.max_order(v);
    for (int k = 0; k <= kmax; ++k) {
        DiffPoly part = jet_partial(p, v, k);
        for (int j = 0; j < k; ++j) part = x_derivative(part);
        if (k % 2 == 0)
            out += part;
        else
            out -= part;
    }
    return out;
}

// Kernel test: p is a total x-derivative iff the variational derivative in
// every variable vanishes and the constant term is zero.
inline bool is_total_derivative(const DiffPoly& p) {
    detail::require_no_s(p, "is_total_derivative");
    if (!p.constant_term().is_zero()) return false;
    for (VarId v : p.alphabet())
        if (!variational_derivative(p, v).is_zero()) return false;
    return true;
}

inline bool equal_mod_total_derivative(const DiffPoly& p, const DiffPoly& q) {
    DiffPoly d = p - q;
    detail::require_no_s(d, "equal_mod_total_derivative");
    if (!d.constant_term().is_zero())
        throw std::invalid_argument("equal_mod_total_derivative: nonzero constant term");
    return is_total_derivative(d);
}

// Greedy highest-term peeling. Requires p to be an exact total derivative;
// each step cancels the current leading monomial and introduces only smaller
// ones, so the loop terminates.
inline DiffPoly formal_antiderivative(const DiffPoly& p) {
    detail::require_no_s(p, "formal_antiderivative");
    if (!is_total_derivative(p)) throw NotATotalDerivative("formal_antiderivative: input fails the Euler test");
    DiffPoly rest = p, out;
    while (!rest.is_zero()) {
        const auto* lead = &*rest.terms().begin();
        for (const auto& t : rest.terms())
            if (detail::mono_peel_less(lead->first, t.first)) lead = &t;
        auto cand = detail::peel_candidate(lead->first);
        if (!cand) throw NotATotalDerivative("formal_antiderivative: peeling stuck");
        Coeff piece = lead->second.scaled(GaussianRational(1) / cand->second);
        out.add(cand->first, piece);
        const DiffPoly dq = x_derivative(cand->first, Coeff(1));
        DiffPoly t;
        for (const auto& [tm, tc] : dq.terms()) t.add(tm, piece * tc);
        rest -= t;
    }
    return out;
}

// Integration-by-parts display form for densities (defined mod d_x): peel
// every monomial that can be peeled without growth. Not applied to exact
// objects like fluxes.
inline DiffPoly reduce_density(const DiffPoly& p) {
    DiffPoly rest = p;
    for (;;) {
        const std::pair<const Monomial, Coeff>* pick = nullptr;
        std::optional<std::pair<Monomial, GaussianRational>> cand;
        for (const auto& t : rest.terms()) {
            if (pick && !detail::mono_peel_less(pick->first, t.first)) continue;
            auto c = detail::peel_candidate(t.first);
            if (c) {
                pick = &t;
                cand = std::move(c);
            }
        }
        if (!pick) return rest;
        Coeff piece = pick->second.scaled(GaussianRational(1) / cand->second);
        const DiffPoly dq = x_derivative(cand->first, Coeff(1));
        for (const auto& [tm, tc] : dq.terms()) rest.add(tm, -(piece * tc));
    }
}

// Termwise homotopy reconstruction: a homogeneity-(k-1) gradient part G_k
// contributes u*G_k/k. Verified by the exact round trip.
inline DiffPoly hamiltonian_from_gradient(const DiffPoly& g, VarId v) {
    detail::require_no_s(g, "hamiltonian_from_gradient");
    DiffPoly h;
    for (const auto& [m, c] : g.terms()) {
        int hom = grading(m).homogeneity;
        DiffPoly t = DiffPoly::term(mono_mul(m, {v, 0, 1}), c.scaled(Rational(1, hom + 1)));
        h += t;
    }
    if (variational_derivative(h, v) != g)
        throw NotAGradient("hamiltonian_from_gradient: round trip failed");
    return h;
}

// Canonical form on the {v, s} alphabet: rewrite v*s -> 1 - s until no
// monomial contains both a zero-order v factor and s.
inline DiffPoly canonicalize_vs(const DiffPoly& p) {
    const VarId v = s_companion(), s = s_var();
    DiffPoly out;
    std::vector<std::pair<Monomial, Coeff>> work(p.terms().begin(), p.terms().end());
    while (!work.empty()) {
        auto [m, c] = std::move(work.back());
        work.pop_back();
        if (mono_power_of(m, v, 0) > 0 && mono_power_of(m, s, 0) > 0) {
            Monomial base = mono_div_once(mono_div_once(m, v, 0), s, 0);
            work.emplace_back(base, c);
            work.emplace_back(mono_mul(base, {s, 0, 1}), -c);
        } else {
            out.add(m, c);
        }
    }
    return out;
}

// Drop the additive constant (it vanishes under d_x).
inline DiffPoly drop_constant(const DiffPoly& p) {
    DiffPoly out = p;
    out -= DiffPoly(p.constant_term());
    return out;
}

// "Pulled" normal form: rewrite p = sum_j d^j(P_j) such that no nonlinear
// monomial carries a factor with more than max_order derivatives. The linear
// part stays in P_0. Pulls only monomials whose maximal-order factor is a
// unique power-1 factor; a tied top order already satisfies 2*alpha <= d.
inline std::vector<DiffPoly> pull_derivatives(const DiffPoly& p, int max_order) {
    std::vector<DiffPoly> levels{p};
    for (std::size_t j = 0; j < levels.size(); ++j) {
        for (int guard = 0;; ++guard) {
            if (guard > 100000) throw std::runtime_error("pull_derivatives: no progress");
            const Monomial* picked = nullptr;
            Coeff c;
            for (const auto& [m, mc] : levels[j].terms()) {
                Grading g = grading(m);
                if (g.homogeneity + g.s_power <= 1) continue;  // linear part exempt
                const VarFactor* f = detail::max_factor(m);
                if (!f || f->order <= max_order) continue;
                int ties = 0;
                for (const auto& other : m)
                    if (other.order == f->order) ties += other.power;
                if (ties != 1)
                    throw std::runtime_error("pull_derivatives: tied top order above target");
                picked = &m;
                c = mc;
                break;
            }
            if (!picked) break;
            const VarFactor* f = detail::max_factor(*picked);
            Monomial q = mono_mul(mono_div_once(*picked, f->var, f->order), {f->var, f->order - 1, 1});
            DiffPoly dq = x_derivative(q, Coeff(1));
            GaussianRational lambda = dq.terms().at(*picked).constant_part();
            Coeff piece = c.scaled(GaussianRational(1) / lambda);
            DiffPoly t;
            for (const auto& [tm, tc] : dq.terms()) t.add(tm, piece * tc);
            levels[j] -= t;
            if (j + 1 >= levels.size()) levels.emplace_back();
            levels[j + 1].add(q, piece);
        }
    }
    return levels;
}

}  // namespace hierlab
