#pragma once

#include "hierlab/hierarchy/lenard.hpp"

namespace hierlab::hierarchy {

// u expressed in the good variable: u = -1/2 s v_xx + 3/4 s^2 v_x^2
// + tau^2 v^2 + 2 tau^2 v, with s = (1+v)^{-1} and z = i tau.
inline DiffPoly u_of_good_variable() {
    const VarId v = var("v"), s = s_var();
    DiffPoly out;
    out += DiffPoly::term(mono({{s, 0, 1}, {v, 2, 1}}), Coeff(GaussianRational(Rational(-1, 2))));
    out += DiffPoly::term(mono({{s, 0, 2}, {v, 1, 2}}), Coeff(GaussianRational(Rational(3, 4))));
    out += DiffPoly::term(mono({{v, 0, 2}}), coeff_tau(2));
    out += DiffPoly::term(mono({{v, 0, 1}}), coeff_tau(2, GaussianRational(Rational(2))));
    return out;
}

namespace detail {

inline void check_goodvar_structure(const DiffPoly& f, int N) {
    const VarId v = var("v");
    DiffPoly lin;
    for (const auto& [m, c] : f.terms()) {
        Grading g = grading(m);
        if (g.homogeneity == 1 && g.s_power == 0) lin.add(m, c);
        for (const auto& [e, gc] : c.terms()) {
            int l = e[0];
            if (l % 2 != 0 || g.weight % 2 != 0)
                throw StructureViolation("good_variable_equation: odd l or d");
            if (l + g.weight != 2 * N)
                throw StructureViolation("good_variable_equation: l + d != 2N");
        }
        if (g.s_power >= 1 && g.s_power > 2 * N - 1)
            throw StructureViolation("good_variable_equation: s-power > 2N-1");
        if (g.homogeneity > 2 * N + 1)
            throw StructureViolation("good_variable_equation: homogeneity > 2N+1");
        if (g.s_power >= 1) {
            // k >= n+1 and at least n+1 factors carrying a derivative; both
            // survive the v*s -> 1-s rewrite because the derivative-factor
            // count is invariant under it and bounds n from above.
            if (g.homogeneity < g.s_power + 1)
                throw StructureViolation("good_variable_equation: k < n+1");
            int deriv_factors = 0;
            for (const auto& fac : m)
                if (fac.var == v && fac.order >= 1) deriv_factors += fac.power;
            if (deriv_factors < g.s_power + 1)
                throw StructureViolation("good_variable_equation: derivative factor count");
        }
        // no v^{a} v^{(2N)} monomial besides the linear part
        if (g.homogeneity >= 2 && mono_power_of(m, v, 2 * N) > 0) {
            bool others_underived = true;
            for (const auto& fac : m)
                if (fac.var == v && fac.order >= 1 && fac.order != 2 * N) others_underived = false;
            if (others_underived)
                throw StructureViolation("good_variable_equation: v^a v^(2N) term present");
        }
    }
    DiffPoly expect_lin =
        DiffPoly::variable(v, 2 * N).scaled(Rational(N % 2 == 0 ? 1 : -1));
    if (lin != expect_lin) throw StructureViolation("good_variable_equation: linear part");
}

}  // namespace detail

// F_N with v_t = d_x F_N: substitute u(v, s) into
// sum_{n=-1}^{N-1} (2 i tau)^{2(N-1-n)} dH_n^KdV/du, multiply by 2(v+1),
// canonicalize with (1+v)s = 1 and drop the additive constant.
inline DiffPoly good_variable_equation(int N, const HierarchyTable& lenard) {
    if (N < 0 || lenard.order < N - 1)
        throw std::invalid_argument("good_variable_equation: need lenard_sequence(N-1)");
    const VarId u = var("u"), v = var("v");
    const std::map<VarId, DiffPoly> repl{{u, u_of_good_variable()}};

    DiffPoly sum;
    for (int n = -1; n <= N - 1; ++n) {
        DiffPoly grad = n == -1 ? kdv_gradient_minus1() : lenard.at(n).gradients[0];
        int k = N - 1 - n;  // (2 i tau)^{2k} = (-4 tau^2)^k
        GaussianRational c(Rational(1));
        for (int j = 0; j < k; ++j) c = c * GaussianRational(Rational(-4));
        sum += substitute(grad, repl).scaled(Coeff::monomial({2 * k, 0}, c));
    }
    DiffPoly f = (DiffPoly::variable(v) + DiffPoly(1)) * sum;
    f = canonicalize_vs(f.scaled(Rational(2)));
    f = drop_constant(f);
    detail::check_goodvar_structure(f, N);
    return f;
}

}  // namespace hierlab::hierarchy
